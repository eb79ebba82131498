//! Pressure-pad sketching pipeline.
//!
//! Streams of 40×40 pressure frames are cleaned, split into finger blobs,
//! voted over a short window, and classified into taps, double taps, long
//! presses and drags. Gestures map onto menu and editing commands that drive
//! a 2D sketch document whose assets can carry five kinds of animation.

pub mod anim;
pub mod cli;
pub mod command;
pub mod framestream;
pub mod geom;
pub mod gesture;
pub mod metrics;
pub mod serve;
pub mod session;
pub mod sketch;
pub mod synth;
pub mod touchdetect;
