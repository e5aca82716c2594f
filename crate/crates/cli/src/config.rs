//! `key = value` defaults files. Each entry becomes `--key value` placed
//! ahead of the real flags, so anything on the command line wins.

use std::fs;

pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

pub fn parse_config(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k.is_empty() {
            return Err(format!("config line {}: empty key", n + 1));
        }
        match v {
            "true" => out.push(format!("--{k}")),
            "false" => {}
            _ => out.push(format!("--{k}={v}")),
        }
    }
    Ok(out)
}

/// argv with the config entries spliced in after the subcommand name.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("--config {path}: {e}"))?;
    let extra = parse_config(&text)?;
    let mut out = Vec::with_capacity(args.len() + extra.len());
    let mut skip_next = false;
    let mut inserted = false;
    for (i, a) in args.into_iter().enumerate() {
        if skip_next {
            skip_next = false;
            continue;
        }
        if a == "--config" {
            skip_next = true;
            continue;
        }
        if a.starts_with("--config=") {
            continue;
        }
        let is_sub = i > 0 && !a.starts_with('-') && !inserted;
        out.push(a);
        if is_sub {
            out.extend(extra.iter().cloned());
            inserted = true;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn parses_pairs_and_flags() {
        let c = parse_config(
            "# recipe\nalpha = 0.2,0.3,0.5\npole_cap=4 # inline\nfinite = true\nidentities=false\n",
        )
        .unwrap();
        assert_eq!(c, v(&["--alpha=0.2,0.3,0.5", "--pole-cap=4", "--finite"]));
        assert!(parse_config("oops").is_err());
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(
            config_path(&v(&["spiv", "scan", "--config", "a.cfg"])),
            Some("a.cfg".into())
        );
        assert_eq!(
            config_path(&v(&["spiv", "--config=b.cfg", "scan"])),
            Some("b.cfg".into())
        );
        assert_eq!(config_path(&v(&["spiv", "scan"])), None);
    }
}
