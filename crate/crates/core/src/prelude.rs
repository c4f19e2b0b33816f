//! Boot-time loading of the Lisp prelude.
//!
//! The manifest lists one file name per line (blank lines and `#` comments
//! ignored); files are loaded in that order.

use std::path::Path;

use crate::error::{LispError, Result};
use crate::lisp::{Interp, Reader, SExpr};

const MANIFEST: &str = include_str!("../prelude/manifest.txt");

const FILES: &[(&str, &str)] = &[
    ("accessors.lsp", include_str!("../prelude/accessors.lsp")),
    ("lists.lsp", include_str!("../prelude/lists.lsp")),
    ("bignum.lsp", include_str!("../prelude/bignum.lsp")),
    ("prettyprint.lsp", include_str!("../prelude/prettyprint.lsp")),
];

/// File names listed in a manifest, in load order.
pub fn manifest_entries(manifest: &str) -> Vec<&str> {
    manifest
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Loads the prelude compiled into the binary.
pub fn load_default(interp: &mut Interp) -> Result<()> {
    for name in manifest_entries(MANIFEST) {
        let text = FILES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| LispError::User(format!("prelude file {name} is not embedded")))?;
        load_source(interp, name, text)?;
    }
    Ok(())
}

/// Loads the files named by a manifest on disk, relative to its directory.
pub fn load_manifest(interp: &mut Interp, manifest: &Path) -> Result<()> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| LispError::User(format!("cannot read {}: {e}", manifest.display())))?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    for name in manifest_entries(&text) {
        let path = dir.join(name);
        let src = std::fs::read_to_string(&path)
            .map_err(|e| LispError::User(format!("cannot read {}: {e}", path.display())))?;
        load_source(interp, name, &src)?;
    }
    Ok(())
}

/// Evaluates every form of a Lisp source text in order.
pub fn load_source(interp: &mut Interp, name: &str, text: &str) -> Result<SExpr> {
    let mut reader = Reader::new(text);
    let mut last = SExpr::NIL;
    loop {
        let line = reader.line();
        let form = match reader.read(interp) {
            Ok(Some(f)) => f,
            Ok(None) => return Ok(last),
            Err(e) => return Err(LispError::User(format!("{name}: {e}"))),
        };
        last = interp
            .eval(&form)
            .map_err(|e| LispError::User(format!("{name} (form at line {line}): {e}")))?;
    }
}

impl Interp {
    /// Prettyprints `e` at the given line width and returns the text.
    pub fn prettyprint(&mut self, e: &SExpr, width: usize) -> Result<String> {
        let width_sym = self.intern("*PPWIDTH*");
        let saved = self.value(width_sym).cloned();
        self.set_value(width_sym, SExpr::Fix(width as i64));
        let pp = self.s.prettyprint;
        let r = self.capture_output(|i| i.apply_sym(pp, std::slice::from_ref(e)));
        match saved {
            Some(v) => self.set_value(width_sym, v),
            None => self.set_value(width_sym, SExpr::Fix(80)),
        }
        r.map(|(_, text)| text)
    }
}
