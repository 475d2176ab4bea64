//! Python bindings: the signal type and the main sampling / recovery /
//! verification entry points, mirroring the CLI surface.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gaborpr_core as core;

fn py_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A bandlimited signal stored through its spectral profile on [-B, B].
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Signal {
    inner: core::BandlimitedSignal,
}

#[pymethods]
impl Signal {
    /// Seeded random signal with unit grid-weighted norm.
    #[staticmethod]
    fn random(b: f64, m: usize, seed: u64) -> PyResult<Signal> {
        core::BandlimitedSignal::random(b, m, core::LebesgueExponent::TWO, seed)
            .map(|inner| Signal { inner })
            .map_err(py_err)
    }

    /// The zero signal.
    #[staticmethod]
    fn zeros(b: f64, m: usize) -> PyResult<Signal> {
        let grid = core::FrequencyGrid::new(b, m).map_err(py_err)?;
        Ok(Signal {
            inner: core::BandlimitedSignal::zero(grid, core::LebesgueExponent::TWO),
        })
    }

    /// Signal from explicit profile values.
    #[staticmethod]
    fn from_values(b: f64, values: Vec<Complex64>) -> PyResult<Signal> {
        let grid = core::FrequencyGrid::new(b, values.len()).map_err(py_err)?;
        core::BandlimitedSignal::new(grid, values, core::LebesgueExponent::TWO)
            .map(|inner| Signal { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Signal> {
        core::io::signal_from_json(text)
            .map(|inner| Signal { inner })
            .map_err(py_err)
    }

    fn to_json(&self) -> String {
        core::io::signal_to_json(&self.inner)
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.grid().half_width()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.grid().len()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.grid().nodes().to_vec()
    }

    /// f(t) synthesized from the profile.
    fn evaluate(&self, t: f64) -> Complex64 {
        self.inner.evaluate(t)
    }

    /// Gabor transform at one time-frequency point.
    fn gabor(&self, x: f64, omega: f64) -> Complex64 {
        core::gabor_transform(&self.inner, x, omega)
    }

    /// (alpha, distance) of the optimal global-phase alignment; `other` is
    /// approximately e^{i alpha} times self.
    fn phase_distance(&self, other: &Signal) -> PyResult<(f64, f64)> {
        core::global_phase_distance(&self.inner, &other.inner)
            .map(|al| (al.alpha, al.distance))
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Signal(B={}, M={}, norm={:.6})",
            self.b(),
            self.m(),
            self.norm()
        )
    }
}

/// |Gf| on the product set X x Omega as a row-major nested list (rows over x).
#[pyfunction]
fn magnitude_samples(signal: &Signal, x: Vec<f64>, omega: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let samples = core::magnitude_samples(&signal.inner, &x, &omega).map_err(py_err)?;
    Ok((0..x.len())
        .map(|i| (0..omega.len()).map(|k| samples.magnitude(i, k)).collect())
        .collect())
}

/// Recovers a signal (up to global phase) from magnitudes on a lattice
/// product set. `x_lattice` is (start, step, count); returns the recovered
/// signal and the JSON recovery report.
#[pyfunction]
fn recover_signal(
    magnitudes: Vec<Vec<f64>>,
    x_lattice: (f64, f64, usize),
    omega: Vec<f64>,
    b: f64,
    m: usize,
    ridge1: f64,
    ridge2: f64,
) -> PyResult<(Signal, String)> {
    let (start, step, count) = x_lattice;
    let x = core::PointSet::lattice(start, step, count).map_err(py_err)?;
    let flat: Vec<f64> = magnitudes.into_iter().flatten().collect();
    let samples =
        core::ProductSamples::new(x.points().to_vec(), omega, flat, b).map_err(py_err)?;
    let config = core::RecoveryConfig { m, ridge1, ridge2 };
    let (signal, report) = core::recover_signal(&samples, &x, &config).map_err(py_err)?;
    let report_json = serde_json::to_string_pretty(&report).expect("report serialization");
    Ok((Signal { inner: signal }, report_json))
}

/// Numerical uniqueness check of two signals over a product set; returns the
/// record as a JSON string with the verdict field.
#[pyfunction]
fn verify_uniqueness(
    a: &Signal,
    b: &Signal,
    x: Vec<f64>,
    omega: Vec<f64>,
    tol: f64,
) -> PyResult<String> {
    let record = core::verify_uniqueness(&a.inner, &b.inner, &x, &omega, tol).map_err(py_err)?;
    Ok(serde_json::to_string_pretty(&record).expect("record serialization"))
}

/// Density report of a declared lattice against band half-width B (JSON).
#[pyfunction]
fn lattice_density_report(
    start: f64,
    step: f64,
    count: usize,
    b: f64,
    r_values: Vec<f64>,
) -> PyResult<String> {
    let set = core::PointSet::lattice(start, step, count).map_err(py_err)?;
    let report =
        core::density_report(&set, b, &r_values, core::DensityConvention::FullLine, 0)
            .map_err(py_err)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serialization"))
}

/// R_theta(x, omega).
#[pyfunction]
fn rotate_point(theta: f64, x: f64, omega: f64) -> (f64, f64) {
    let p = core::rotate_point(theta, core::TfPoint { x, omega });
    (p.x, p.omega)
}

/// Max residual of the time-frequency rotation identity on a square grid of
/// half-width `reach` and step `step`.
#[pyfunction]
fn rotation_identity_residual(
    signal: &Signal,
    theta: f64,
    reach: f64,
    step: f64,
) -> PyResult<f64> {
    let n = (2.0 * reach / step).round() as usize;
    let mut pts = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            pts.push(core::TfPoint {
                x: -reach + i as f64 * step,
                omega: -reach + j as f64 * step,
            });
        }
    }
    let pad = core::PadConfig::auto(signal.inner.grid().half_width(), theta, reach, reach);
    core::rotation_identity_residual(&signal.inner, theta, &pts, &pad).map_err(py_err)
}

/// Out-of-band energy fraction of the demodulated Gabor slice at omega.
#[pyfunction]
fn band_energy_ratio(signal: &Signal, omega: f64, t_window: f64, x_step: f64) -> f64 {
    core::band_energy_ratio(&signal.inner, omega, t_window, x_step)
}

#[pymodule]
fn gaborpr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Signal>()?;
    m.add_function(wrap_pyfunction!(magnitude_samples, m)?)?;
    m.add_function(wrap_pyfunction!(recover_signal, m)?)?;
    m.add_function(wrap_pyfunction!(verify_uniqueness, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_density_report, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_point, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(band_energy_ratio, m)?)?;
    Ok(())
}
