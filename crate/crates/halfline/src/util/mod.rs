pub mod dd;
pub mod fd;
pub mod par;
