pub mod oracle;
pub mod trials;
