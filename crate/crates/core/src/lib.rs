pub mod bipoly;
pub mod cli;
pub mod constructions;
pub mod corpus;
pub mod format;
pub mod iso;
pub mod multigraph;
pub mod phigen;
pub mod tutte;
pub mod verify;
