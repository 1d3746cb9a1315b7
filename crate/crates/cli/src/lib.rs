pub mod config;
pub mod jobs;
pub mod report;
pub mod scenario;
