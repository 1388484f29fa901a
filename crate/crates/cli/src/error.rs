use std::fmt;

use phenom_harness::ErrorKind as HarnessKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Data,
    Adapter,
    Io,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Config => 2,
            Category::Data => 3,
            Category::Adapter => 4,
            Category::Io => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Config => "config",
            Category::Data => "data",
            Category::Adapter => "adapter",
            Category::Io => "io",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        Self {
            category,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Category::Config, message)
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self::new(Category::Data, message)
    }

    /// `error[category] code=N: message` on a single line.
    pub fn line(&self) -> String {
        let message: Vec<&str> = self.message.split_whitespace().collect();
        format!(
            "error[{}] code={}: {}",
            self.category.as_str(),
            self.category.exit_code(),
            message.join(" ")
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl From<phenom_core::Error> for CliError {
    fn from(e: phenom_core::Error) -> Self {
        let category = match e.kind() {
            phenom_core::error::ErrorKind::Config => Category::Config,
            phenom_core::error::ErrorKind::Data => Category::Data,
            phenom_core::error::ErrorKind::Io => Category::Io,
        };
        Self::new(category, e.to_string())
    }
}

impl From<phenom_harness::Error> for CliError {
    fn from(e: phenom_harness::Error) -> Self {
        let category = match e.kind() {
            HarnessKind::Config => Category::Config,
            HarnessKind::Data => Category::Data,
            HarnessKind::Adapter => Category::Adapter,
            HarnessKind::Io => Category::Io,
        };
        Self::new(category, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(Category::Io, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new(Category::Data, e.to_string())
    }
}
