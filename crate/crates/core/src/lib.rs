#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex_special;
pub mod quadrature;
pub mod abel_plana;
pub mod jcm;
