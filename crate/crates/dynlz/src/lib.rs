pub mod dynstr;
pub mod error;
pub mod index;
pub mod lpf;
pub mod lpftree;
pub mod engine;
pub mod oracle;
pub mod gadgets;
