pub mod sample_log;
pub mod oracles;
