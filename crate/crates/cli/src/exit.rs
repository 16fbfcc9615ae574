//! Exit statuses: 0 clean, 1 relations found, 2 usage or input error,
//! 3 the operation could not be applied.

pub const FOUND: u8 = 1;
pub const USAGE: u8 = 2;
pub const APPLY: u8 = 3;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub trait OrExit<T> {
    fn or_exit(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}
