pub mod config { }
