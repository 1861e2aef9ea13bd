pub mod blend;
pub mod observers;
pub mod qmap;
pub mod replay;
pub mod tree;
