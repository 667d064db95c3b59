//! Streams of modules.
//!
//! Text streams separate modules with `#module NAME.` lines. Numeric streams
//! are plain concatenations; each module ends with its model count line.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::module::Module;

use super::smodels::{decode_smodels, encode_smodels};
use super::text::{parse_text, print_text};
use super::Format;

/// Lazily reads the modules of a stream in order.
pub struct ModuleStream<R> {
    reader: R,
    format: Format,
    index: usize,
    pending: Option<String>,
    done: bool,
}

impl<R: BufRead> ModuleStream<R> {
    pub fn new(reader: R, format: Format) -> Self {
        ModuleStream {
            reader,
            format,
            index: 0,
            pending: None,
            done: false,
        }
    }

    fn read_line(&mut self) -> Result<Option<String>> {
        if let Some(l) = self.pending.take() {
            return Ok(Some(l));
        }
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line))
    }

    fn next_text_chunk(&mut self) -> Result<Option<String>> {
        let mut chunk = String::new();
        let mut content = false;
        while let Some(line) = self.read_line()? {
            let is_sep = line.trim_start().starts_with("#module");
            if is_sep && content {
                self.pending = Some(line);
                break;
            }
            content |= is_sep || has_content(&line);
            chunk.push_str(&line);
        }
        Ok(content.then_some(chunk))
    }

    fn next_numeric_chunk(&mut self) -> Result<Option<String>> {
        let mut chunk = String::new();
        let mut zeros = 0;
        let mut in_compute = false;
        let mut content = false;
        while let Some(line) = self.read_line()? {
            chunk.push_str(&line);
            let t = line.trim();
            if t.is_empty() || (t.starts_with('%') && !content) {
                continue;
            }
            content = true;
            if zeros == 4 {
                return Ok(Some(chunk));
            }
            if t == "0" && (zeros < 2 || in_compute) {
                zeros += 1;
                in_compute = false;
            } else if t == "B+" || t == "B-" {
                in_compute = true;
            }
        }
        Ok(content.then_some(chunk))
    }
}

fn has_content(line: &str) -> bool {
    let code = line.split('%').next().unwrap_or("");
    !code.trim().is_empty()
}

impl<R: BufRead> Iterator for ModuleStream<R> {
    type Item = Result<Module>;

    fn next(&mut self) -> Option<Result<Module>> {
        if self.done {
            return None;
        }
        let chunk = match self.format {
            Format::Text => self.next_text_chunk(),
            Format::Smodels => self.next_numeric_chunk(),
        };
        let index = self.index;
        self.index += 1;
        let parsed = match chunk {
            Ok(None) => {
                self.done = true;
                return None;
            }
            Ok(Some(c)) => match self.format {
                Format::Text => parse_text(&c),
                Format::Smodels => decode_smodels(c.as_bytes()),
            },
            Err(e) => {
                self.done = true;
                Err(e)
            }
        };
        Some(parsed.map_err(|e| Error::Stream {
            index,
            source: Box::new(e),
        }))
    }
}

/// Reads every module of a stream held in memory.
pub fn stream_modules(bytes: &[u8], format: Format) -> Result<Vec<Module>> {
    ModuleStream::new(bytes, format).collect()
}

/// Writes modules as one stream, preserving order.
pub fn write_stream<'a, W: Write>(
    out: &mut W,
    modules: impl IntoIterator<Item = &'a Module>,
    format: Format,
) -> Result<()> {
    for (i, m) in modules.into_iter().enumerate() {
        match format {
            Format::Text => {
                writeln!(out, "#module m{i}.")?;
                out.write_all(print_text(m).as_bytes())?;
            }
            Format::Smodels => out.write_all(&encode_smodels(m))?,
        }
    }
    Ok(())
}

/// [`write_stream`] into a byte vector.
pub fn stream_to_bytes<'a>(modules: impl IntoIterator<Item = &'a Module>, format: Format) -> Vec<u8> {
    let mut out = Vec::new();
    write_stream(&mut out, modules, format).expect("writing to memory");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Atom;
    use crate::module::set;
    use crate::rule::Rule;

    fn a(n: &str) -> Atom {
        Atom::named(n)
    }

    fn sample() -> Vec<Module> {
        vec![
            Module::new([Rule::basic(a("a"), [], [a("b")])], set(&["b"]), set(&["a"]), set(&[])).unwrap(),
            Module::new([Rule::basic(a("b"), [], [a("c")])], set(&["c"]), set(&["b"]), set(&[])).unwrap(),
            Module::new([], set(&["q"]), set(&[]), set(&[])).unwrap(),
            Module::new(
                [Rule::choice([a("c")], [], []), Rule::fact(a("d"))],
                set(&[]),
                set(&["c", "d"]),
                set(&[]),
            )
            .unwrap(),
        ]
    }

    #[test]
    fn round_trip_both_formats() {
        for format in [Format::Text, Format::Smodels] {
            let ms = sample();
            let bytes = stream_to_bytes(&ms, format);
            assert_eq!(stream_modules(&bytes, format).unwrap(), ms);
        }
    }

    #[test]
    fn empty_stream() {
        for format in [Format::Text, Format::Smodels] {
            assert!(stream_modules(b"", format).unwrap().is_empty());
            assert!(stream_modules(b"\n% nothing\n", format).unwrap().is_empty());
        }
    }

    #[test]
    fn error_carries_index() {
        let ms = sample();
        let text = String::from_utf8(stream_to_bytes(&ms[..3], Format::Text)).unwrap();
        let broken = text.replace("a :- not b.", "a :- not .");
        match stream_modules(broken.as_bytes(), Format::Text) {
            Err(Error::Stream { index, .. }) => assert_eq!(index, 0),
            other => panic!("{other:?}"),
        }
        let broken = text.replace("b :- not c.", "b :- not c");
        match stream_modules(broken.as_bytes(), Format::Text) {
            Err(Error::Stream { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        let num = String::from_utf8(stream_to_bytes(&ms[..3], Format::Smodels)).unwrap();
        let mut parts: Vec<String> = num.split_inclusive("B-\n0\n1\n").map(str::to_string).collect();
        parts[1] = parts[1].replacen("\n1 ", "\n7 ", 1);
        match stream_modules(parts.concat().as_bytes(), Format::Smodels) {
            Err(Error::Stream { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_module_without_separator() {
        let ms = stream_modules(b"#output a.\na.\n", Format::Text).unwrap();
        assert_eq!(ms.len(), 1);
    }
}
