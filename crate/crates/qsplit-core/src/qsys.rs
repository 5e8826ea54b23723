//! Placeholder; implemented bottom-up.
