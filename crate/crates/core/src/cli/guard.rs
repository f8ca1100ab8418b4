use std::fs;
use std::path::{Path, PathBuf};

/// Tracks files written by a command and deletes them unless the command
/// commits.
#[derive(Debug, Default)]
pub struct OutputGuard {
    created: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `path` for cleanup and returns it.
    pub fn track(&mut self, path: impl AsRef<Path>) -> PathBuf {
        let p = path.as_ref().to_path_buf();
        self.created.push(p.clone());
        p
    }

    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for p in &self.created {
            let _ = fs::remove_file(p);
        }
    }
}
