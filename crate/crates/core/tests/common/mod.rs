#![allow(dead_code)]

pub mod dot;
pub mod generator;
pub mod xlsx_reader;
