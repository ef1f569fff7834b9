//! Builtin scenarios for `warpgraph verify --suite`.

use anyhow::{bail, Result};

use crate::config::ScenarioConfig;

const HYPERBOLIC_M2: &str = r#"
name = "hyperbolic-m2"
[space]
tau = "hyperbolic"
m = 2
t_max = 20.0
[graph]
kind = "cmc-radial"
c = 0.5
"#;

const HYPERBOLIC_M3: &str = r#"
name = "hyperbolic-m3"
[space]
tau = "hyperbolic"
m = 3
t_max = 20.0
[graph]
kind = "cmc-radial"
c = 1.0
"#;

const HYPERBOLIC_LOG_COSH: &str = r#"
name = "hyperbolic-log-cosh"
[space]
tau = "hyperbolic"
psi = "log-cosh"
m = 2
# keeps cosh(t) / h^2 small enough for the xi residual to resolve 1e-5
t_max = 10.0
[graph]
kind = "cmc-radial"
c = 1.0
"#;

const EUCLIDEAN: &str = r#"
name = "euclidean"
[space]
tau = "euclidean"
m = 2
t_max = 10.0
[graph]
kind = "cmc-radial"
c = 0.1
[probes]
radii = [0.5, 1.0, 2.0, 5.0]
[comparison]
alpha = 0.0
delta = 0.0
"#;

const SPHERE: &str = r#"
name = "sphere"
[space]
tau = "sphere"
m = 2
t_max = 3.0
[graph]
kind = "constant"
[comparison]
alpha = 1.0
delta = 0.0
"#;

const CONSTANT: &str = r#"
name = "constant"
[space]
tau = "hyperbolic"
psi = "log-cosh"
m = 2
t_max = 20.0
[graph]
kind = "constant"
value = [0.3]
"#;

pub const SUITES: [(&str, &str); 6] = [
    ("hyperbolic-m2", HYPERBOLIC_M2),
    ("hyperbolic-m3", HYPERBOLIC_M3),
    ("hyperbolic-log-cosh", HYPERBOLIC_LOG_COSH),
    ("euclidean", EUCLIDEAN),
    ("sphere", SPHERE),
    ("constant", CONSTANT),
];

/// Configs for `name`, or every suite for `all`.
pub fn load(name: &str) -> Result<Vec<ScenarioConfig>> {
    if name == "all" {
        return SUITES.iter().map(|(_, text)| ScenarioConfig::parse(text)).collect();
    }
    match SUITES.iter().find(|(n, _)| *n == name) {
        Some((_, text)) => Ok(vec![ScenarioConfig::parse(text)?]),
        None => {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            bail!("unknown suite `{name}`; known suites: {}, all", known.join(", "))
        }
    }
}
