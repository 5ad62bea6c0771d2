//! Seeded synthetic scenes with known ground truth, and their file formats.

pub mod io;
mod scene;

pub use scene::{generate_scene, ClutterMode, GeneratedScene, SceneConfig, SceneError, GT_TOLERANCE};
