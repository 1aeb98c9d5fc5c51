//! TOML files that preload command-line flags.
//!
//! Top-level keys become flags for every subcommand; a table named after a
//! subcommand adds flags for that subcommand only. Flags given on the command
//! line come later and win.
//!
//! ```toml
//! workers = 4
//!
//! [amplitude]
//! cuts = "auto"
//! max-rank = 30
//! no-timing = true
//! ```

use std::ffi::OsString;

use toml::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("key '{0}': unsupported value type")]
    Unsupported(String),
}

fn push_value(out: &mut Vec<OsString>, key: &str, value: &Value) -> Result<(), ConfigError> {
    let flag = format!("--{key}");
    match value {
        Value::Boolean(true) => out.push(flag.into()),
        Value::Boolean(false) => {}
        Value::String(s) => out.extend([flag.into(), s.into()]),
        Value::Integer(i) => out.extend([flag.into(), i.to_string().into()]),
        Value::Float(f) => out.extend([flag.into(), f.to_string().into()]),
        Value::Array(items) => {
            for item in items {
                push_value(out, key, item)?;
            }
        }
        _ => return Err(ConfigError::Unsupported(key.into())),
    }
    Ok(())
}

/// Flags for `subcommand` from the config text, in file order.
pub fn flags_for(text: &str, subcommand: &str) -> Result<Vec<OsString>, ConfigError> {
    let table: toml::Table = text.parse()?;
    let mut out = Vec::new();
    for (key, value) in &table {
        if !value.is_table() {
            push_value(&mut out, key, value)?;
        }
    }
    if let Some(Value::Table(section)) = table.get(subcommand) {
        for (key, value) in section {
            push_value(&mut out, key, value)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_types() {
        let text = "workers = 2\n[amplitude]\ncuts = \"auto\"\nmax-rank = 30\nno-timing = true\nout = [\"01\", \"10\"]\n[gen]\ndepth = 4\n";
        let flags: Vec<String> = flags_for(text, "amplitude")
            .unwrap()
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert_eq!(
            flags,
            [
                "--workers",
                "2",
                "--cuts",
                "auto",
                "--max-rank",
                "30",
                "--no-timing",
                "--out",
                "01",
                "--out",
                "10"
            ]
        );
        let gen: Vec<OsString> = flags_for(text, "gen").unwrap();
        assert_eq!(gen.len(), 4);
        assert!(flags_for("x = {a = 1}\n", "gen").is_ok());
        assert!(flags_for("[[bad]]\na = 1\n", "bad").is_err());
        assert!(flags_for("not toml", "gen").is_err());
    }
}
