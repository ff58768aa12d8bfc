//! Flat TOML run files turned into command-line arguments.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use toml::Value;

use crate::UsageError;

pub const COMMANDS: [&str; 6] = ["moments", "mgf", "density", "simulate", "invert", "verify"];

fn render(key: &str, v: &Value) -> Result<Option<String>> {
    Ok(Some(match v {
        Value::String(s) => s.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::Boolean(_) => return Ok(None),
        Value::Array(items) => {
            let parts: Vec<String> =
                items.iter().map(|i| render(key, i).map(|s| s.unwrap_or_default())).collect::<Result<_>>()?;
            parts.join(",")
        }
        _ => bail!(UsageError(format!("config key `{key}` must be a scalar or an array"))),
    }))
}

/// Reads `path` and returns the subcommand it names (if any) and the
/// equivalent flags.
pub fn load(path: &Path) -> Result<(Option<String>, Vec<OsString>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| UsageError(format!("{}: {}", path.display(), e.message())))?;
    let mut command = None;
    let mut flags = Vec::new();
    for (key, value) in &table {
        if key == "command" {
            match value.as_str() {
                Some(c) if COMMANDS.contains(&c) => command = Some(c.to_string()),
                _ => bail!(UsageError(format!("config `command` must be one of {COMMANDS:?}"))),
            }
            continue;
        }
        if key == "config" {
            bail!(UsageError("config files cannot include other config files".into()));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match (value, render(key, value)?) {
            (Value::Boolean(true), _) => flags.push(flag.into()),
            (Value::Boolean(false), _) => {}
            (_, Some(v)) => {
                flags.push(flag.into());
                flags.push(v.into());
            }
            (_, None) => {}
        }
    }
    Ok((command, flags))
}

/// Builds the argument vector clap sees: the subcommand, then flags from the
/// config file, then the user's own flags, so that the latter win.
pub fn merge_argv(raw: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut iter = raw.into_iter();
    let bin = iter.next().unwrap_or_else(|| "occtime".into());
    let mut rest: Vec<OsString> = Vec::new();
    let mut config = None;
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy().into_owned();
        if s == "--config" {
            let v = iter.next().ok_or_else(|| UsageError("--config needs a file".into()))?;
            config = Some(v);
        } else if let Some(v) = s.strip_prefix("--config=") {
            config = Some(v.into());
        } else {
            rest.push(arg);
        }
    }
    let Some(config) = config else {
        let mut argv = vec![bin];
        argv.extend(rest);
        return Ok(argv);
    };
    let (file_command, flags) = load(Path::new(&config))?;
    let pos = rest.iter().position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()));
    let (globals, command, user) = match pos {
        Some(i) => {
            let cmd = rest[i].to_string_lossy().into_owned();
            if let Some(fc) = &file_command {
                if *fc != cmd {
                    bail!(UsageError(format!("config names command `{fc}` but `{cmd}` was given")));
                }
            }
            (rest[..i].to_vec(), cmd, rest[i + 1..].to_vec())
        }
        None => match file_command {
            Some(c) => (Vec::new(), c, rest),
            None => bail!(UsageError("no subcommand given on the command line or in the config file".into())),
        },
    };
    let mut argv = vec![bin];
    argv.extend(globals);
    argv.push(command.into());
    argv.extend(flags);
    argv.extend(user);
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[OsString]) -> Vec<String> {
        v.iter().map(|s| s.to_string_lossy().into_owned()).collect()
    }

    #[test]
    fn file_flags_precede_user_flags() {
        let dir = std::env::temp_dir().join(format!("occtime-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "command = \"mgf\"\nr = [0.5, 2]\nlambda = 1\nexact = true\nquiet = false\n").unwrap();
        let raw: Vec<OsString> =
            ["occtime", "--workers", "2", "--config", path.to_str().unwrap(), "--lambda", "3"].iter().map(Into::into).collect();
        let argv = strs(&merge_argv(raw).unwrap());
        assert_eq!(argv, ["occtime", "mgf", "--exact", "--lambda", "1", "--r", "0.5,2", "--workers", "2", "--lambda", "3"]);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn without_config_arguments_pass_through() {
        let raw: Vec<OsString> = ["occtime", "moments", "--n-max", "2"].iter().map(Into::into).collect();
        assert_eq!(strs(&merge_argv(raw).unwrap()), ["occtime", "moments", "--n-max", "2"]);
    }
}
