pub mod props;
pub mod walker;
