#![allow(dead_code)]

use std::path::PathBuf;

use fjpeg_core::{read_pnm, Image};

pub const PHOTOS: [&str; 4] = ["astronaut.ppm", "camera.pgm", "chelsea.ppm", "coffee.ppm"];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn photo(name: &str) -> Image {
    let bytes = std::fs::read(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    read_pnm(&bytes).unwrap()
}

pub fn photos() -> Vec<(&'static str, Image)> {
    PHOTOS.iter().map(|&n| (n, photo(n))).collect()
}
