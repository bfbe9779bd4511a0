pub mod catalog;
pub mod field;
pub mod jordan;
pub mod moufang;
pub mod nearfield;
pub mod permgroup;
pub mod report;
pub mod ultra;
