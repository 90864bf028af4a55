pub use symx_core;
