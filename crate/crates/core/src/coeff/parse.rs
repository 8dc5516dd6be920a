//! Text grammar for model files.
//!
//! ```text
//! # comment
//! model = finite{(1, 0.5, 0), (3, 0.25)}
//! model = powerlaw{s=1, cutoff=64}
//! model = cor3{gamma=0.75, form=pow}
//! coeffs = reciprocal | list{1, 0.5, 0.25} | rule{p=1, q=0}
//! ```
//!
//! Statements are separated by newlines or `;`.

use serde::{Deserialize, Serialize};

use super::model::{CoeffsDescriptor, Cor3Form, ModelDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Option<ModelDescriptor>,
    pub coeffs: Option<CoeffsDescriptor>,
}

pub fn parse_model_spec(text: &str) -> Result<ModelSpec> {
    let mut spec = ModelSpec::default();
    for (line, stmt) in statements(text)? {
        let (key, value) = stmt
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected `key = value`, got `{stmt}`")))?;
        let (name, body) = split_call(value.trim()).map_err(|m| perr(line, m))?;
        match key.trim() {
            "model" => {
                if spec.model.is_some() {
                    return Err(perr(line, "model given twice".into()));
                }
                spec.model = Some(parse_model(name, body).map_err(|m| perr(line, m))?);
            }
            "coeffs" => {
                if spec.coeffs.is_some() {
                    return Err(perr(line, "coeffs given twice".into()));
                }
                spec.coeffs = Some(parse_coeffs(name, body).map_err(|m| perr(line, m))?);
            }
            other => return Err(perr(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(spec)
}

fn perr(line: usize, msg: String) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Splits at top-level `;` and newlines, dropping comments and blanks.
fn statements(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut start_line = 1;
    let mut line = 1;
    let mut in_comment = false;
    for ch in text.chars() {
        if ch == '\n' {
            in_comment = false;
        } else if in_comment {
            continue;
        } else if ch == '#' {
            in_comment = true;
            continue;
        }
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(line, format!("unbalanced `{ch}`")));
                }
            }
            _ => {}
        }
        if depth == 0 && (ch == ';' || ch == '\n') {
            if !cur.trim().is_empty() {
                out.push((start_line, cur.trim().to_string()));
            }
            cur.clear();
        } else {
            if cur.trim().is_empty() {
                start_line = line;
            }
            cur.push(ch);
        }
        if ch == '\n' {
            line += 1;
        }
    }
    if depth != 0 {
        return Err(perr(start_line, "unterminated bracket".into()));
    }
    if !cur.trim().is_empty() {
        out.push((start_line, cur.trim().to_string()));
    }
    Ok(out)
}

fn split_call(value: &str) -> std::result::Result<(&str, Option<&str>), String> {
    match value.find('{') {
        None => Ok((value, None)),
        Some(i) => {
            let rest = value[i + 1..].trim_end();
            let body = rest
                .strip_suffix('}')
                .ok_or_else(|| format!("expected `}}` at end of `{value}`"))?;
            Ok((value[..i].trim(), Some(body)))
        }
    }
}

fn num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("bad number `{}`", s.trim()))
}

fn keyed(body: Option<&str>) -> std::result::Result<Vec<(String, String)>, String> {
    let Some(body) = body else {
        return Ok(Vec::new());
    };
    body.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("expected `name=value`, got `{}`", p.trim()))
        })
        .collect()
}

fn take(args: &mut Vec<(String, String)>, key: &str) -> Option<String> {
    let i = args.iter().position(|(k, _)| k == key)?;
    Some(args.remove(i).1)
}

fn no_extra(args: &[(String, String)]) -> std::result::Result<(), String> {
    match args.first() {
        Some((k, _)) => Err(format!("unknown parameter `{k}`")),
        None => Ok(()),
    }
}

fn parse_model(name: &str, body: Option<&str>) -> std::result::Result<ModelDescriptor, String> {
    match name {
        "finite" => {
            let body = body.ok_or("finite needs `{...}`")?;
            let mut terms = Vec::new();
            let mut rest = body.trim();
            while !rest.is_empty() {
                let open = rest
                    .strip_prefix('(')
                    .ok_or_else(|| format!("expected `(` in `{rest}`"))?;
                let close = open.find(')').ok_or("missing `)`")?;
                let parts: Vec<&str> = open[..close].split(',').collect();
                let (k, re, im) = match parts.as_slice() {
                    [k, re] => (num(k)?, num(re)?, 0.0),
                    [k, re, im] => (num(k)?, num(re)?, num(im)?),
                    _ => return Err(format!("term `({})` needs 2 or 3 fields", &open[..close])),
                };
                terms.push((k, re, im));
                rest = open[close + 1..].trim_start();
                rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
            }
            Ok(ModelDescriptor::Finite { terms })
        }
        "powerlaw" => {
            let mut a = keyed(body)?;
            let s = num(&take(&mut a, "s").ok_or("powerlaw needs `s`")?)?;
            let cutoff = take(&mut a, "cutoff").map(|c| num(&c)).transpose()?;
            no_extra(&a)?;
            Ok(ModelDescriptor::PowerLaw { s, cutoff })
        }
        "cor3" => {
            let mut a = keyed(body)?;
            let gamma = num(&take(&mut a, "gamma").ok_or("cor3 needs `gamma`")?)?;
            let form = match take(&mut a, "form").as_deref() {
                None | Some("pow") => Cor3Form::Pow,
                Some("log") => Cor3Form::Log,
                Some(f) => return Err(format!("unknown cor3 form `{f}`")),
            };
            no_extra(&a)?;
            Ok(ModelDescriptor::Cor3 { gamma, form })
        }
        other => Err(format!("unknown model kind `{other}`")),
    }
}

fn parse_coeffs(name: &str, body: Option<&str>) -> std::result::Result<CoeffsDescriptor, String> {
    match name {
        "reciprocal" => match body {
            None => Ok(CoeffsDescriptor::Reciprocal),
            Some(b) if b.trim().is_empty() => Ok(CoeffsDescriptor::Reciprocal),
            Some(_) => Err("reciprocal takes no parameters".into()),
        },
        "list" => {
            let body = body.ok_or("list needs `{...}`")?;
            let values = body
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(num)
                .collect::<std::result::Result<_, _>>()?;
            Ok(CoeffsDescriptor::List { values })
        }
        "rule" => {
            let mut a = keyed(body)?;
            let p = take(&mut a, "p")
                .map(|v| num(&v))
                .transpose()?
                .unwrap_or(1.0);
            let q = take(&mut a, "q")
                .map(|v| num(&v))
                .transpose()?
                .unwrap_or(0.0);
            no_extra(&a)?;
            Ok(CoeffsDescriptor::Rule { p, q })
        }
        other => Err(format!("unknown coeffs kind `{other}`")),
    }
}
