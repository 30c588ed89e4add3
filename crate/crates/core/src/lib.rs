//! Surfaces built from a disk and bands inside the genus-two handlebody,
//! the words their bands read in the free group on `x`, `y`, and the
//! checks that certify the induced maps on fundamental groups are injective.

pub mod criteria;
pub mod families;
pub mod freegroup;
pub mod ribbon;
pub mod report;
pub mod stallings;
pub mod svg;
