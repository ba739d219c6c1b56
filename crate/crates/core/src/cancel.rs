//! Cooperative cancellation for long normal-form computations.
//!
//! A [`CancelToken`] installed with [`with_token`] is polled by the
//! elimination loops once per row operation; when it fires they return
//! [`Error::Cancelled`](crate::Error::Cancelled).

use std::cell::RefCell;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

thread_local! {
    static CURRENT: RefCell<Option<CancelToken>> = const { RefCell::new(None) };
}

/// Runs `f` with `token` installed for the current thread.
pub fn with_token<T>(token: &CancelToken, f: impl FnOnce() -> T) -> T {
    let prev = CURRENT.with(|c| c.replace(Some(token.clone())));
    let out = f();
    CURRENT.with(|c| *c.borrow_mut() = prev);
    out
}

pub(crate) fn checkpoint() -> Result<()> {
    CURRENT.with(|c| match &*c.borrow() {
        Some(t) if t.is_cancelled() => Err(Error::Cancelled),
        _ => Ok(()),
    })
}
