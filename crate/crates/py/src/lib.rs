use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use plt_core::diagram::diagram_to_json;
use plt_core::interp::interp_closed;
use plt_core::lambda::{
    normalize, parse_program, parse_term, parse_type, typecheck, Mode, Program, Signature,
};
use plt_core::registers::{
    machine_to_lambda, run_machine as run_register_machine, RegisterMachine,
};
use plt_core::two_way::{
    check_equiv as check, compile, convert_convention, from_table as table_transducer,
    lambda_transducer_of, parse_table, str_function_from_program, LambdaTransducer, TransducerJson,
    TwoWayTransducer,
};

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode(name: &str) -> PyResult<Mode> {
    name.parse().map_err(err)
}

/// A two-way planar reversible transducer.
#[pyclass(name = "Transducer", module = "plt")]
pub struct Transducer {
    inner: TwoWayTransducer,
}

#[pymethods]
impl Transducer {
    /// Output on `word`, or None for ⊥.
    fn run(&self, word: &str) -> PyResult<Option<String>> {
        self.inner.run_word(word).map_err(err)
    }

    /// `"pp"` or `"eps_pm"`.
    fn convert(&self, to: &str) -> PyResult<Transducer> {
        let to = to.parse().map_err(err)?;
        Ok(Transducer {
            inner: convert_convention(&self.inner, to).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json()).expect("JSON values serialize")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Transducer> {
        let j: TransducerJson = serde_json::from_str(text).map_err(err)?;
        Ok(Transducer {
            inner: TwoWayTransducer::from_json(&j).map_err(err)?,
        })
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    #[getter]
    fn states(&self) -> String {
        self.inner.states().to_string()
    }

    #[getter]
    fn convention(&self) -> String {
        self.inner.convention().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Transducer(convention={}, states='{}')",
            self.inner.convention(),
            self.inner.states()
        )
    }
}

fn lambda_transducer(
    p: &Program,
    term: &str,
    ty: Option<&str>,
    mode: Mode,
) -> PyResult<LambdaTransducer> {
    if let Some(l) = LambdaTransducer::from_program(p, mode).map_err(err)? {
        return Ok(l);
    }
    let f = str_function_from_program(p, term, ty).map_err(err)?;
    lambda_transducer_of(&f, mode).map_err(err)
}

/// Checks `term` against `ty` over the letters `alphabet`; returns the type.
#[pyfunction]
#[pyo3(signature = (term, ty, alphabet = "", mode = "planar"))]
fn typecheck_term(term: &str, ty: &str, alphabet: &str, mode: &str) -> PyResult<String> {
    let sig = Signature::from_str_letters(alphabet).map_err(err)?;
    let ty = parse_type(ty).map_err(err)?.expand();
    typecheck(
        &parse_term(term).map_err(err)?,
        &ty,
        &sig,
        self::mode(mode)?,
    )
    .map_err(err)?;
    Ok(ty.to_string())
}

#[pyfunction]
fn normalize_term(term: &str) -> PyResult<String> {
    Ok(normalize(&parse_term(term).map_err(err)?)
        .map_err(err)?
        .to_string())
}

/// Diagram JSON of a closed purely affine term.
#[pyfunction]
#[pyo3(signature = (term, ty, alphabet = "", mode = "planar"))]
fn interp(term: &str, ty: &str, alphabet: &str, mode: &str) -> PyResult<String> {
    let sig = Signature::from_str_letters(alphabet).map_err(err)?;
    let ty = parse_type(ty).map_err(err)?.expand();
    let d = interp_closed(
        &parse_term(term).map_err(err)?,
        &ty,
        &sig,
        self::mode(mode)?,
    )
    .map_err(err)?;
    Ok(serde_json::to_string(&diagram_to_json(&d, alphabet)).expect("JSON values serialize"))
}

/// Transducer of a `.tbl` transition table.
#[pyfunction]
fn from_table(text: &str) -> PyResult<Transducer> {
    let tbl = parse_table(text).map_err(err)?;
    Ok(Transducer {
        inner: table_transducer(&tbl).map_err(err)?,
    })
}

/// Compiles a `.lam` program: a λ-transducer layout, or the string
/// function `term`.
#[pyfunction]
#[pyo3(signature = (program, term = "main", ty = None, mode = "planar"))]
fn compile_program(
    program: &str,
    term: &str,
    ty: Option<&str>,
    mode: &str,
) -> PyResult<Transducer> {
    let p = parse_program(program).map_err(err)?;
    let l = lambda_transducer(&p, term, ty, self::mode(mode)?)?;
    Ok(Transducer {
        inner: compile(&l).map_err(err)?,
    })
}

/// Output of a `.lam` program on `word` by normalization.
#[pyfunction]
#[pyo3(signature = (program, word, term = "main", ty = None, mode = "planar"))]
fn run_lambda(
    program: &str,
    word: &str,
    term: &str,
    ty: Option<&str>,
    mode: &str,
) -> PyResult<String> {
    let p = parse_program(program).map_err(err)?;
    let mode = self::mode(mode)?;
    if let Some(l) = LambdaTransducer::from_program(&p, mode).map_err(err)? {
        return l.run_oracle(word).map_err(err);
    }
    str_function_from_program(&p, term, ty)
        .map_err(err)?
        .apply(word)
        .map_err(err)
}

#[pyfunction]
fn run_machine(machine: &str, word: &str) -> PyResult<String> {
    let m: RegisterMachine = machine.parse().map_err(err)?;
    run_register_machine(&m, word).map_err(err)
}

/// `.lam` λ-transducer of a register machine JSON.
#[pyfunction]
fn machine_to_lam(machine: &str) -> PyResult<String> {
    let m: RegisterMachine = machine.parse().map_err(err)?;
    Ok(machine_to_lambda(&m).map_err(err)?.to_lam())
}

/// First sampled word where the program and transducer disagree, as
/// `(word, expected, found)`, or None.
#[pyfunction]
#[pyo3(signature = (program, transducer, samples = 500, max_len = 16, seed = 42, term = "main", mode = "planar"))]
fn check_equiv(
    program: &str,
    transducer: PyRef<'_, Transducer>,
    samples: usize,
    max_len: usize,
    seed: u64,
    term: &str,
    mode: &str,
) -> PyResult<Option<(String, String, Option<String>)>> {
    let p = parse_program(program).map_err(err)?;
    let l = lambda_transducer(&p, term, None, self::mode(mode)?)?;
    let report = check(&l, &transducer.inner, samples, max_len, seed).map_err(err)?;
    Ok(report.counterexample.map(|c| (c.word, c.expected, c.found)))
}

#[pymodule]
fn plt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Transducer>()?;
    m.add_function(wrap_pyfunction!(typecheck_term, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_term, m)?)?;
    m.add_function(wrap_pyfunction!(interp, m)?)?;
    m.add_function(wrap_pyfunction!(from_table, m)?)?;
    m.add_function(wrap_pyfunction!(compile_program, m)?)?;
    m.add_function(wrap_pyfunction!(run_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(run_machine, m)?)?;
    m.add_function(wrap_pyfunction!(machine_to_lam, m)?)?;
    m.add_function(wrap_pyfunction!(check_equiv, m)?)?;
    Ok(())
}
