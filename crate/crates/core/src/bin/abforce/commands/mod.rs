//! One function per subcommand.

mod analytic;
mod regimes;
mod sweep;
mod table1;
mod trajectory;

pub use analytic::analytic;
pub use regimes::regimes;
pub use sweep::sweep;
pub use table1::table1;
pub use trajectory::trajectory;

use serde_json::{Map, Value};

/// Small helper for the `parameters_si` echo.
#[derive(Default)]
struct SiEcho(Map<String, Value>);

impl SiEcho {
    fn put(&mut self, key: &str, v: Option<f64>) {
        if let Some(v) = v {
            self.0.insert(key.into(), v.into());
        }
    }

    fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}
