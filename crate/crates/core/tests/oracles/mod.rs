#![allow(dead_code)]

pub mod chains;
pub mod graphs;
pub mod normal;
pub mod plumbing;
