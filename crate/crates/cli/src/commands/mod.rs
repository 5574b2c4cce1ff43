pub mod cover;
pub mod eval;
pub mod explain;
pub mod gen;
pub mod mclist;
pub mod verify;
