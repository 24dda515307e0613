pub mod decoration;
pub mod ingest;
pub mod linalg;
pub mod necklace;
pub mod perm;
pub mod polytope;
pub mod positroid;
pub mod render;
pub mod report;
pub mod subset;
