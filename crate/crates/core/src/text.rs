//! Small helpers shared by the canonical text grammars.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{bail, Error, Result};

/// Splits on `sep` outside of `[]`, `()` and `{}`.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// `head key=value key=value …`, whitespace separated at bracket depth 0.
pub(crate) fn head_and_pairs(s: &str) -> Result<(String, Vec<(String, String)>)> {
    let mut tokens = split_top(s.trim(), ' ').into_iter().map(str::trim).filter(|t| !t.is_empty());
    let head = match tokens.next() {
        Some(h) => h.to_string(),
        None => bail!(Parse, "empty text"),
    };
    let mut pairs: Vec<(String, String)> = Vec::new();
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse(alloc::format!("expected key=value, got {t:?}")))?;
        if pairs.iter().any(|(q, _)| q == k) {
            bail!(Parse, "duplicate key {k:?}");
        }
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok((head, pairs))
}

pub(crate) fn expect_keys(pairs: &[(String, String)], allowed: &[&str], ctx: &str) -> Result<()> {
    for (k, _) in pairs {
        if !allowed.contains(&k.as_str()) {
            bail!(Parse, "unknown key {k:?} in {ctx:?}");
        }
    }
    Ok(())
}

pub(crate) fn get<'a>(pairs: &'a [(String, String)], key: &str, ctx: &str) -> Result<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()).ok_or_else(|| Error::Parse(alloc::format!("missing {key}= in {ctx:?}")))
}

/// Comma-separated list at depth 0; empty input gives an empty list.
pub(crate) fn parse_list<T: FromStr>(inner: &str) -> Result<Vec<T>> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(inner, ',')
        .into_iter()
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::Parse(alloc::format!("bad list item {:?}", t.trim()))))
        .collect()
}

/// Strips one pair of surrounding brackets.
pub(crate) fn bracketed(s: &str, open: char, close: char) -> Result<&str> {
    let s = s.trim();
    s.strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| Error::Parse(alloc::format!("expected {open}…{close}, got {s:?}")))
}

pub(crate) fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}
