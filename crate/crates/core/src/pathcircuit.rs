//! Reaction paths as qubit probabilities.
//!
//! Every unfixed atomic coordinate `x` becomes one qubit prepared as
//! `R_y(2·arccos √(x/R_ref))|0⟩`, so its probability of reading 0 is the
//! fractional coordinate. A generator circuit of `R_y` columns and optional
//! CZ chains acts on the encoded register and the path is read back from the
//! single-qubit marginals.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{Circuit, Gate, StateVector};

/// Smallest spacing (Å) between consecutive atoms of a linear row.
pub const MIN_SPACING: f64 = 1e-6;

/// Default reference length (Å).
pub const DEFAULT_RREF: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowRole {
    Is,
    Image,
    Fs,
}

impl RowRole {
    fn token(self) -> &'static str {
        match self {
            RowRole::Is => "IS",
            RowRole::Image => "IMG",
            RowRole::Fs => "FS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub role: RowRole,
    /// `n_atoms · ndim` coordinates (Å), atom-major.
    pub coords: Vec<f64>,
    /// One flag per atom.
    pub fixed: Vec<bool>,
}

/// Ordered rows IS, images…, FS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    rows: Vec<PathRow>,
    rref: f64,
    ndim: usize,
}

impl PathSpec {
    pub fn new(rows: Vec<PathRow>, rref: f64, ndim: usize) -> Result<Self> {
        let p = Self { rows, rref, ndim };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.rref > 0.0 && self.rref.is_finite()) {
            return bad(format!("R_ref must be positive, got {}", self.rref));
        }
        if self.ndim == 0 {
            return bad("ndim must be >= 1".into());
        }
        if self.rows.len() < 3 {
            return bad("a path needs IS, at least one image, and FS".into());
        }
        let last = self.rows.len() - 1;
        for (i, row) in self.rows.iter().enumerate() {
            let expected = match i {
                0 => RowRole::Is,
                i if i == last => RowRole::Fs,
                _ => RowRole::Image,
            };
            if row.role != expected {
                return bad(format!("row {i} is {:?}, expected {:?}", row.role, expected));
            }
            if row.fixed.len() != self.rows[0].fixed.len() || row.coords.len() != row.fixed.len() * self.ndim {
                return bad(format!("row {i} has inconsistent atom count"));
            }
            if row.fixed.is_empty() {
                return bad(format!("row {i} has no atoms"));
            }
            if row.role != RowRole::Image && row.fixed.iter().any(|f| !f) {
                return bad(format!("endpoint row {i} must be fully fixed"));
            }
            if !row.fixed[0] {
                return bad(format!("the first atom must be fixed (row {i})"));
            }
            for (k, &x) in row.coords.iter().enumerate() {
                if !(0.0..=self.rref).contains(&x) {
                    return Err(Error::CoordinateOutOfRange {
                        row: i,
                        atom: k / self.ndim,
                        value: x,
                        rref: self.rref,
                    });
                }
            }
            check_ordering(i, row, self.ndim)?;
        }
        Ok(())
    }

    /// Linear H₃ path: `(n_images − 1)/2` images interpolated between IS and
    /// the intermediate point, the intermediate point itself, then the same
    /// number between it and FS. Endpoints and atom A are fixed. Each row is
    /// given as `(R_AB, R_BC)` in Å.
    pub fn h3_linear(
        is: [f64; 2],
        imp: [f64; 2],
        fs: [f64; 2],
        n_images: usize,
        rref: f64,
    ) -> Result<Self> {
        if n_images.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "n_images must be odd to contain the intermediate point, got {n_images}"
            )));
        }
        let half = (n_images - 1) / 2;
        let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let mut rc = vec![is];
        for k in 1..=half {
            rc.push(lerp(is, imp, k as f64 / (half + 1) as f64));
        }
        rc.push(imp);
        for k in 1..=half {
            rc.push(lerp(imp, fs, k as f64 / (half + 1) as f64));
        }
        rc.push(fs);
        Self::from_reaction_coordinates(&rc, rref)
    }

    /// Rows of consecutive-atom spacings, first atom at the origin and fixed,
    /// endpoints fully fixed.
    pub fn from_reaction_coordinates(rows: &[[f64; 2]], rref: f64) -> Result<Self> {
        let last = rows.len().saturating_sub(1);
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let endpoint = i == 0 || i == last;
                PathRow {
                    role: if i == 0 {
                        RowRole::Is
                    } else if i == last {
                        RowRole::Fs
                    } else {
                        RowRole::Image
                    },
                    coords: vec![0.0, r[0], r[0] + r[1]],
                    fixed: vec![true, endpoint, endpoint],
                }
            })
            .collect();
        Self::new(rows, rref, 1)
    }

    pub fn rows(&self) -> &[PathRow] {
        &self.rows
    }

    pub fn rref(&self) -> f64 {
        self.rref
    }

    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn n_images(&self) -> usize {
        self.rows.len() - 2
    }

    pub fn n_atoms(&self) -> usize {
        self.rows[0].fixed.len()
    }

    /// Unfixed atoms over all rows.
    pub fn n_unfixed(&self) -> usize {
        self.rows.iter().map(|r| r.fixed.iter().filter(|f| !**f).count()).sum()
    }

    pub fn n_qubits(&self) -> usize {
        self.ndim * self.n_unfixed()
    }

    /// Spacings between consecutive atoms of a row (`R_AB, R_BC, …` for a
    /// chain); Euclidean distances when `ndim > 1`.
    pub fn reaction_coordinates(&self, row: usize) -> Vec<f64> {
        let r = &self.rows[row];
        let d = self.ndim;
        (1..self.n_atoms())
            .map(|a| {
                (0..d)
                    .map(|k| (r.coords[a * d + k] - r.coords[(a - 1) * d + k]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    pub fn all_reaction_coordinates(&self) -> Vec<Vec<f64>> {
        (0..self.rows.len()).map(|i| self.reaction_coordinates(i)).collect()
    }

    /// Positions of a row as a flat coordinate list (Å).
    pub fn positions(&self, row: usize) -> &[f64] {
        &self.rows[row].coords
    }

    /// Returns a copy with the unfixed coordinates replaced.
    pub fn with_coordinates(&self, row: usize, coords: Vec<f64>) -> Result<Self> {
        let mut p = self.clone();
        p.rows[row].coords = coords;
        p.validate()?;
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rref = None;
        let mut ndim = None;
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let err = |message: String| Error::Parse { line: lineno, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(v) = line.strip_prefix("rref:") {
                rref = Some(v.trim().parse::<f64>().map_err(|_| err(format!("bad rref `{}`", v.trim())))?);
                continue;
            }
            if let Some(v) = line.strip_prefix("ndim:") {
                ndim = Some(v.trim().parse::<usize>().map_err(|_| err(format!("bad ndim `{}`", v.trim())))?);
                continue;
            }
            let mut toks = line.split_whitespace();
            let role = match toks.next() {
                Some("IS") => RowRole::Is,
                Some("IMG") => RowRole::Image,
                Some("FS") => RowRole::Fs,
                Some(t) => return Err(err(format!("unknown row role `{t}`"))),
                None => unreachable!(),
            };
            let d = ndim.unwrap_or(1);
            let mut coords = Vec::new();
            let mut fixed = Vec::new();
            for tok in toks {
                let (c, f) = tok
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected `coordinate:flag`, got `{tok}`")))?;
                let parts: Vec<f64> = c
                    .split(',')
                    .map(|x| x.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(format!("bad coordinate `{c}`")))?;
                if parts.len() != d {
                    return Err(err(format!("expected {d} components in `{c}`")));
                }
                coords.extend(parts);
                fixed.push(match f {
                    "1" | "f" | "F" => true,
                    "0" | "u" | "U" => false,
                    _ => return Err(err(format!("bad fixed flag `{f}`"))),
                });
            }
            rows.push(PathRow { role, coords, fixed });
        }
        Self::new(rows, rref.unwrap_or(DEFAULT_RREF), ndim.unwrap_or(1))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rref: {}", self.rref);
        let _ = writeln!(out, "ndim: {}", self.ndim);
        for row in &self.rows {
            out.push_str(row.role.token());
            for (a, f) in row.fixed.iter().enumerate() {
                let c: Vec<String> = row.coords[a * self.ndim..(a + 1) * self.ndim]
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                let _ = write!(out, " {}:{}", c.join(","), if *f { 1 } else { 0 });
            }
            out.push('\n');
        }
        out
    }
}

fn check_ordering(row_index: usize, row: &PathRow, ndim: usize) -> Result<()> {
    if ndim == 1 && row.coords.windows(2).any(|w| w[1] - w[0] < MIN_SPACING) {
        return Err(Error::OrderingViolation {
            row: row_index,
            coords: row.coords.clone(),
        });
    }
    Ok(())
}

/// Location of one encoded coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitSlot {
    pub row: usize,
    pub atom: usize,
    pub component: usize,
}

/// Qubit `m` ↔ `slots[m]`, assigned row-major (row, then atom, then
/// component).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitMap {
    pub slots: Vec<QubitSlot>,
}

impl QubitMap {
    pub fn for_path(path: &PathSpec) -> Self {
        let mut slots = Vec::new();
        for (row, r) in path.rows.iter().enumerate() {
            for (atom, f) in r.fixed.iter().enumerate() {
                if !f {
                    for component in 0..path.ndim {
                        slots.push(QubitSlot { row, atom, component });
                    }
                }
            }
        }
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// Encoding circuit plus the qubit assignment.
pub fn fractional_encode(path: &PathSpec) -> Result<(Circuit, QubitMap)> {
    let map = QubitMap::for_path(path);
    let mut circ = Circuit::new(map.len());
    for (m, s) in map.slots.iter().enumerate() {
        let x = path.rows[s.row].coords[s.atom * path.ndim + s.component];
        if !(0.0..=path.rref).contains(&x) {
            return Err(Error::CoordinateOutOfRange {
                row: s.row,
                atom: s.atom,
                value: x,
                rref: path.rref,
            });
        }
        circ.push(Gate::Ry {
            target: m,
            angle: encoding_angle(x / path.rref),
        })?;
    }
    Ok((circ, map))
}

/// `2·arccos √r`, the `R_y` angle whose `|0⟩` probability is `r`.
pub fn encoding_angle(r: f64) -> f64 {
    2.0 * r.clamp(0.0, 1.0).sqrt().acos()
}

/// Parameterized generator layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub theta: Vec<f64>,
    pub depth: usize,
    pub entanglers: bool,
}

impl GeneratorConfig {
    /// Two `R_y` columns per block.
    pub fn n_params(n_qubits: usize, depth: usize) -> usize {
        2 * n_qubits * depth
    }

    pub fn zeros(n_qubits: usize, depth: usize, entanglers: bool) -> Self {
        Self {
            theta: vec![0.0; Self::n_params(n_qubits, depth)],
            depth,
            entanglers,
        }
    }
}

/// `depth` blocks of `R_y` column → CZ chain on `(m, m+1)` → `R_y` column.
/// Parameters are consumed block by block, column by column.
pub fn build_generator(cfg: &GeneratorConfig, n_qubits: usize) -> Result<Circuit> {
    let expected = GeneratorConfig::n_params(n_qubits, cfg.depth);
    if cfg.theta.len() != expected {
        return Err(Error::ParameterLength {
            expected,
            found: cfg.theta.len(),
        });
    }
    let mut circ = Circuit::new(n_qubits);
    let mut k = 0;
    for _ in 0..cfg.depth {
        for q in 0..n_qubits {
            circ.push(Gate::Ry { target: q, angle: cfg.theta[k] })?;
            k += 1;
        }
        if cfg.entanglers {
            for q in 0..n_qubits.saturating_sub(1) {
                circ.push(Gate::Cz { control: q, target: q + 1 })?;
            }
        }
        for q in 0..n_qubits {
            circ.push(Gate::Ry { target: q, angle: cfg.theta[k] })?;
            k += 1;
        }
    }
    Ok(circ)
}

/// Reads the path back from the single-qubit marginals.
pub fn decode_path(state: &StateVector, template: &PathSpec, map: &QubitMap) -> Result<PathSpec> {
    if state.n_qubits() != map.len() {
        return Err(Error::QubitCountMismatch {
            expected: map.len(),
            found: state.n_qubits(),
        });
    }
    decode_marginals(&state.marginals_zero(), template, map)
}

fn decode_marginals(p0: &[f64], template: &PathSpec, map: &QubitMap) -> Result<PathSpec> {
    let mut out = template.clone();
    for (s, &p) in map.slots.iter().zip(p0) {
        out.rows[s.row].coords[s.atom * template.ndim + s.component] = p.clamp(0.0, 1.0) * template.rref;
    }
    for (i, row) in out.rows.iter().enumerate() {
        check_ordering(i, row, out.ndim)?;
    }
    Ok(out)
}

/// Encoder, generator and decoder for one template path.
#[derive(Debug, Clone)]
pub struct PathGenerator {
    template: PathSpec,
    map: QubitMap,
    encoder: Circuit,
    depth: usize,
    entanglers: bool,
}

impl PathGenerator {
    pub fn new(template: PathSpec, depth: usize, entanglers: bool) -> Result<Self> {
        let (encoder, map) = fractional_encode(&template)?;
        Ok(Self {
            template,
            map,
            encoder,
            depth,
            entanglers,
        })
    }

    pub fn template(&self) -> &PathSpec {
        &self.template
    }

    pub fn qubit_map(&self) -> &QubitMap {
        &self.map
    }

    pub fn n_qubits(&self) -> usize {
        self.map.len()
    }

    pub fn n_params(&self) -> usize {
        GeneratorConfig::n_params(self.n_qubits(), self.depth)
    }

    pub fn config(&self, theta: &[f64]) -> GeneratorConfig {
        GeneratorConfig {
            theta: theta.to_vec(),
            depth: self.depth,
            entanglers: self.entanglers,
        }
    }

    /// `U_g(θ)|ψ_enc⟩`.
    pub fn state(&self, theta: &[f64]) -> Result<StateVector> {
        let gen = build_generator(&self.config(theta), self.n_qubits())?;
        let mut s = StateVector::zero(self.n_qubits())?;
        s.run(&self.encoder)?;
        s.run(&gen)?;
        Ok(s)
    }

    pub fn generate(&self, theta: &[f64]) -> Result<PathSpec> {
        decode_path(&self.state(theta)?, &self.template, &self.map)
    }
}
