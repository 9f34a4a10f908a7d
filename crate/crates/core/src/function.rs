use crate::error::{Error, Result};
use crate::graphs::{Family, FractalGraph};

/// Real-valued function on the vertices of one graph, stored in the graph's
/// vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    family: Family,
    level: usize,
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn zeros(graph: &FractalGraph) -> Self {
        Self::constant(graph, 0.0)
    }

    pub fn constant(graph: &FractalGraph, c: f64) -> Self {
        VertexFunction {
            family: graph.family(),
            level: graph.level(),
            values: vec![c; graph.len()],
        }
    }

    pub fn from_values(graph: &FractalGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.len() {
            return Err(Error::LengthMismatch {
                expected: graph.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(VertexFunction {
            family: graph.family(),
            level: graph.level(),
            values,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Errors unless this function lives on `graph`.
    pub fn check_domain(&self, graph: &FractalGraph) -> Result<()> {
        if self.family != graph.family() || self.level != graph.level() {
            return Err(Error::DomainMismatch {
                expected_family: graph.family(),
                expected_level: graph.level(),
                found_family: self.family,
                found_level: self.level,
            });
        }
        if self.values.len() != graph.len() {
            return Err(Error::LengthMismatch {
                expected: graph.len(),
                found: self.values.len(),
            });
        }
        Ok(())
    }

    /// Value at a text address such as `"12"` or `"1.2"`.
    pub fn at(&self, graph: &FractalGraph, address: &str) -> Result<f64> {
        self.check_domain(graph)?;
        Ok(self.values[graph.find(address)?])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &VertexFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> VertexFunction {
        VertexFunction {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &VertexFunction) {
        debug_assert_eq!((self.family, self.level), (other.family, other.level));
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &VertexFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Indices of vertices where `|f| > tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].abs() > tol)
            .collect()
    }
}
