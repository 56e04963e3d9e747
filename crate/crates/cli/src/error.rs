use std::fmt;

/// Exit 1 for usage errors, 2 for data errors.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    /// A data error prefixed with the module error type and variant, e.g.
    /// `DatasetError::Format: line 3: ...`.
    pub fn data<E: fmt::Debug + fmt::Display>(module: &str, e: E) -> Self {
        let debug = format!("{e:?}");
        let variant: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        CliError::Data(format!("{module}::{variant}: {e}"))
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

macro_rules! from_module {
    ($($ty:ty => $name:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::data($name, e)
            }
        })*
    };
}

from_module! {
    molprompt::SmilesError => "SmilesError",
    molprompt::descriptors::DescriptorError => "DescriptorError",
    molprompt::teachers::TeacherError => "TeacherError",
    molprompt::dataset::DatasetError => "DatasetError",
    molprompt::generators::GeneratorError => "GeneratorError",
    molprompt::evaluation::EvalError => "EvalError",
    molprompt::augmentation::AugmentError => "AugmentError",
}
