//! Semistable degenerations of double octic Calabi-Yau threefolds.

pub mod exact;
pub mod forms;
pub mod incidence;
pub mod classify;
pub mod diagram;
pub mod resolve;
pub mod semistable;
pub mod specseq;
pub mod scenario;
pub mod pipeline;
