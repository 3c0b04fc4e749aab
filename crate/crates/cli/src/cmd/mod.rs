pub mod bivar;
pub mod correlogram;
pub mod global;
pub mod local;
pub mod scatter;
pub mod synth;
pub mod wiki;
