use std::fs;
use std::path::{Path, PathBuf};

use garrote::{Error, Result};
use serde::Serialize;

/// Creates the output directory on first use and writes files into it.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &str) -> Self {
        OutDir {
            root: PathBuf::from(root),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn ensure(&self) -> Result<()> {
        fs::create_dir_all(&self.root).map_err(Error::Io)
    }

    pub fn write_text(&self, name: &str, content: &str) -> Result<PathBuf> {
        self.ensure()?;
        let path = self.path(name);
        fs::write(&path, content).map_err(Error::Io)?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut body = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
        body.push('\n');
        self.write_text(name, &body)
    }
}

pub fn announce(path: &Path) {
    println!("wrote {}", path.display());
}
