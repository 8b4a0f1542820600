mod evaluate;
mod generate;
mod train;

pub use evaluate::run as evaluate;
pub use generate::run as generate;
pub use train::run as train;
