pub mod bundle;
pub mod closed_forms;
pub mod error;
pub mod jet;
pub mod linalg;
pub mod oracle;
pub mod region;
pub mod rigidity;
pub mod sampling;
pub mod space_forms;
pub mod verify;
