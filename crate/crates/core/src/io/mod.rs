pub mod det_csv;
pub mod landmarks;
pub mod netpbm;
