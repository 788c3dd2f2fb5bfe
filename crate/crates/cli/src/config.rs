//! Config files: a TOML table whose keys are long flag names. Flags given on the
//! command line win; the remaining keys are appended as flags and parsed again.

use std::path::Path;

fn flag_present(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let with_value = format!("{long}=");
    args.iter().any(|a| *a == long || a.starts_with(&with_value))
}

fn value_text(key: &str, v: &toml::Value) -> Result<Option<String>, String> {
    Ok(Some(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(true) => return Ok(Some(String::new())),
        toml::Value::Boolean(false) => return Ok(None),
        toml::Value::Array(items) => {
            let parts: Result<Vec<String>, String> = items
                .iter()
                .map(|x| match value_text(key, x)? {
                    Some(s) if !s.is_empty() => Ok(s),
                    _ => Err(format!("config key `{key}`: arrays hold strings or numbers")),
                })
                .collect();
            parts?.join(",")
        }
        _ => return Err(format!("config key `{key}`: unsupported value type")),
    }))
}

/// `args` extended by the config keys it does not already set.
pub fn merge(args: &[String], path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let table: toml::Table = text.parse().map_err(|e| format!("config {}: {e}", path.display()))?;
    let mut out = args.to_vec();
    for (key, v) in &table {
        if key == "config" {
            return Err("config files cannot name another config".into());
        }
        if flag_present(args, key) {
            continue;
        }
        match value_text(key, v)? {
            None => {}
            Some(s) if s.is_empty() => out.push(format!("--{key}")),
            Some(s) => {
                out.push(format!("--{key}"));
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_wins() {
        let dir = std::env::temp_dir().join(format!("cycmzv-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "p = 7\nalpha = 2\nns = [1, 2]\nperturbed = true\nquiet = false\n").unwrap();
        let args: Vec<String> = ["cycmzv", "verify", "act-rt", "--p=5"].iter().map(|s| s.to_string()).collect();
        let merged = merge(&args, &path).unwrap();
        assert_eq!(merged[4..], ["--alpha", "2", "--ns", "1,2", "--perturbed"].map(String::from));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
