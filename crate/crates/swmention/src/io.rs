//! Plain or gzipped file access.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, IoContext, Result};

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Opens `path` for buffered reading, decompressing when the file starts
/// with the gzip magic bytes.
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::MissingInput { artifact: "input file", path: path.to_path_buf() },
        _ => Error::io(path, e),
    })?;
    let mut reader = BufReader::new(file);
    let gz = reader.fill_buf().at(path)?.starts_with(&GZIP_MAGIC);
    Ok(if gz { Box::new(BufReader::new(MultiGzDecoder::new(reader))) } else { Box::new(reader) })
}

pub fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    open_input(path)?.read_to_string(&mut s).at(path)?;
    Ok(s)
}

/// Output sink that gzips when the path ends in `.gz`. The gzip header
/// carries no timestamp, so equal content gives equal bytes.
pub enum Output {
    Plain(BufWriter<File>),
    Gzip(GzEncoder<BufWriter<File>>),
}

impl Output {
    pub fn create(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).at(dir)?;
        }
        let file = BufWriter::new(File::create(path).at(path)?);
        Ok(if path.extension().is_some_and(|e| e == "gz") {
            Output::Gzip(GzEncoder::new(file, Compression::default()))
        } else {
            Output::Plain(file)
        })
    }

    /// Flushes buffers and writes the gzip trailer.
    pub fn finish(self) -> io::Result<()> {
        match self {
            Output::Plain(mut w) => w.flush(),
            Output::Gzip(gz) => gz.finish()?.flush(),
        }
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Output::Plain(w) => w.write(buf),
            Output::Gzip(w) => w.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Output::Plain(w) => w.flush(),
            Output::Gzip(w) => w.flush(),
        }
    }
}

/// Writes through `f` and finishes the file, attributing errors to `path`.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut Output) -> io::Result<()>,
{
    let mut out = Output::create(path)?;
    f(&mut out).at(path)?;
    out.finish().at(path)
}
