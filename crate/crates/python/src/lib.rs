//! Python bindings: a `Session` class over the algebra system.

use std::sync::Mutex;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

// Deeply nested expressions recurse far past the default thread stack.
const STACK: usize = 256 * 1024 * 1024;

fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> PyResult<T> {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(STACK)
            .spawn_scoped(scope, f)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?
            .join()
            .map_err(|_| PyRuntimeError::new_err("evaluation panicked"))
    })
}

/// One independent session with its own variables, rules and switches.
#[pyclass]
struct Session {
    inner: Mutex<minireduce::Session>,
}

impl Session {
    fn with<T: Send>(&self, py: Python<'_>, f: impl FnOnce(&mut minireduce::Session) -> T + Send) -> PyResult<T> {
        py.detach(|| {
            let mut guard = self
                .inner
                .lock()
                .map_err(|_| PyRuntimeError::new_err("session poisoned"))?;
            let s: &mut minireduce::Session = &mut guard;
            on_big_stack(move || f(s))
        })
    }
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (width = 80))]
    fn new(width: usize) -> PyResult<Self> {
        if width < 16 {
            return Err(PyValueError::new_err("width must be at least 16"));
        }
        let mut s = on_big_stack(minireduce::Session::new)?
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        s.interp().set_width(width);
        s.set_echo(false);
        Ok(Session { inner: Mutex::new(s) })
    }

    /// Runs one statement and returns what it printed.
    fn eval_statement(&self, py: Python<'_>, text: &str) -> PyResult<String> {
        let text = text.to_string();
        self.with(py, move |s| s.eval_statement(&text))?
            .map_err(PyValueError::new_err)
    }

    /// Simplifies an algebraic expression and returns its printed form.
    fn simplify(&self, py: Python<'_>, expr: &str) -> PyResult<String> {
        let expr = expr.to_string();
        self.with(py, move |s| s.simplify(&expr))?
            .map_err(PyValueError::new_err)
    }

    /// Runs a whole source text. Returns (stdout, stderr, error count).
    fn run_source(&self, py: Python<'_>, src: &str) -> PyResult<(String, String, usize)> {
        let src = src.to_string();
        let t = self.with(py, move |s| s.run_source(&src))?;
        Ok((t.stdout, t.stderr, t.errors))
    }
}

#[pymodule]
fn pyreduce(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    Ok(())
}
