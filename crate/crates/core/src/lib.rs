pub mod dom;
pub mod grammar;
pub mod page;
pub mod annotator;
pub mod pipeline;
pub mod walker;
