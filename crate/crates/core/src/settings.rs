use crate::bernoulli::BERNOULLI_CAP;
use crate::error::{Error, Result};

pub const DEPTH_CAP_VAR: &str = "SQUEEZE_DEPTH_CAP";
pub const BISECT_CAP_VAR: &str = "SQUEEZE_BISECT_CAP";

/// Work limits shared by series evaluation and certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    /// Largest series index `N` a partial sum may reach.
    pub depth_cap: usize,
    /// How many times a sign check may halve its target width.
    pub escalation_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            depth_cap: 200,
            escalation_cap: 12,
        }
    }
}

impl Settings {
    pub fn new(depth_cap: usize, escalation_cap: usize) -> Result<Self> {
        if !(2..=BERNOULLI_CAP).contains(&depth_cap) {
            return Err(Error::InvalidArgument(format!(
                "depth cap must lie in 2..={BERNOULLI_CAP}, got {depth_cap}"
            )));
        }
        Ok(Settings {
            depth_cap,
            escalation_cap,
        })
    }

    /// Defaults overridden by `SQUEEZE_DEPTH_CAP` and `SQUEEZE_BISECT_CAP`.
    pub fn from_env() -> Result<Self> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let d = Settings::default();
        let read = |var: &str, default: usize| -> Result<usize> {
            match lookup(var) {
                None => Ok(default),
                Some(v) => v.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "{var} must be a non-negative integer, got {v:?}"
                    ))
                }),
            }
        };
        Settings::new(
            read(DEPTH_CAP_VAR, d.depth_cap)?,
            read(BISECT_CAP_VAR, d.escalation_cap)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides() {
        let s = Settings::from_lookup(|k| (k == DEPTH_CAP_VAR).then(|| "80".to_string())).unwrap();
        assert_eq!(s.depth_cap, 80);
        assert_eq!(s.escalation_cap, 12);
        assert!(Settings::from_lookup(|_| Some("x".into())).is_err());
        assert!(Settings::from_lookup(|k| (k == DEPTH_CAP_VAR).then(|| "1".into())).is_err());
        assert_eq!(
            Settings::from_lookup(|_| None).unwrap(),
            Settings::default()
        );
    }
}
