//! Reading and writing modules.

mod smodels;
mod stream;
mod text;

pub use smodels::{decode_smodels, encode_smodels};
pub use stream::{stream_modules, stream_to_bytes, write_stream, ModuleStream};
pub(crate) use text::{name_cmp, print_names};
pub use text::{parse_text, print_text};

use crate::error::Result;
use crate::module::Module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Smodels,
}

impl Format {
    pub fn read(self, bytes: &[u8]) -> Result<Module> {
        match self {
            Format::Text => parse_text(&String::from_utf8_lossy(bytes)),
            Format::Smodels => decode_smodels(bytes),
        }
    }

    pub fn write(self, m: &Module) -> Vec<u8> {
        match self {
            Format::Text => print_text(m).into_bytes(),
            Format::Smodels => encode_smodels(m),
        }
    }
}
