pub mod a_sum;
pub mod coeffs;
pub mod lineshape;
pub mod sidebands;
pub mod verify;
