//! FCIDUMP parsing and the second-quantized Hamiltonian coefficients.
//!
//! The FCIDUMP format: a namelist header carrying `NORB`, `NELEC`, `MS2`,
//! then one `value i j k l` line per symmetry-unique integral.  Indices are
//! 1-based; chemists' notation `(ij|kl)` for the two-electron entries;
//! `k = l = 0` marks a one-electron entry and `i = j = k = l = 0` the scalar
//! core energy (nuclear repulsion plus any frozen-core constant).

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Tolerance for flagging duplicate entries that disagree.
const DUPLICATE_TOL: f64 = 1e-10;

/// One- and two-electron integrals over spatial orbitals, in hartree.
///
/// Immutable after parsing; shareable across threads.
#[derive(Debug, Clone)]
pub struct IntegralTable {
    norb: usize,
    nelec: usize,
    ms2: i32,
    core_energy: f64,
    /// Dense `norb x norb`, symmetric.
    one_body: Vec<f64>,
    /// Dense `norb^4`, filled with the full 8-fold real-orbital symmetry.
    two_body: Vec<f64>,
}

impl IntegralTable {
    /// Build a table directly from dense coefficient arrays (row-major
    /// `norb^2` and `norb^4`).  Symmetry of the inputs is trusted.
    pub fn from_dense(
        norb: usize,
        nelec: usize,
        ms2: i32,
        core_energy: f64,
        one_body: Vec<f64>,
        two_body: Vec<f64>,
    ) -> Result<Self> {
        if one_body.len() != norb * norb || two_body.len() != norb.pow(4) {
            return Err(Error::Shape(format!(
                "expected {}^2 and {}^4 coefficients, got {} and {}",
                norb,
                norb,
                one_body.len(),
                two_body.len()
            )));
        }
        Ok(Self { norb, nelec, ms2, core_energy, one_body, two_body })
    }

    /// All-zero table, useful as a starting point for synthetic Hamiltonians.
    pub fn empty(norb: usize, nelec: usize, ms2: i32) -> Self {
        Self {
            norb,
            nelec,
            ms2,
            core_energy: 0.0,
            one_body: vec![0.0; norb * norb],
            two_body: vec![0.0; norb.pow(4)],
        }
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn nelec(&self) -> usize {
        self.nelec
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    /// One-electron integral `<p|T+V_N|q>`, 0-based.
    pub fn one(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.norb + q]
    }

    /// Two-electron integral `(pq|rs)` in chemists' notation, 0-based.
    pub fn two(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.norb;
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    /// Occupation of the Hartree-Fock determinant: the lowest `nelec/2`
    /// spatial orbitals.
    pub fn hf_occupation(&self) -> Vec<usize> {
        (0..self.nelec / 2).collect()
    }

    /// Closed-shell Hartree-Fock electronic energy of the given occupied
    /// orbital set: `2 Σ_i h(i,i) + Σ_ij [2(ii|jj) − (ij|ji)]`.
    ///
    /// The core energy is not added; the result equals the diagonal FCI
    /// matrix element of the corresponding determinant.
    pub fn hf_reference_energy(&self, occupied: &[usize]) -> Result<f64> {
        if self.nelec % 2 != 0 || occupied.len() != self.nelec / 2 {
            return Err(Error::Unsupported(format!(
                "closed-shell reference requires nelec/2 = {} occupied orbitals, got {}",
                self.nelec / 2,
                occupied.len()
            )));
        }
        let mut e = 0.0;
        for &i in occupied {
            e += 2.0 * self.one(i, i);
            for &j in occupied {
                e += 2.0 * self.two(i, i, j, j) - self.two(i, j, j, i);
            }
        }
        Ok(e)
    }

    /// Parse FCIDUMP text.
    pub fn parse_fcidump(text: &str) -> Result<Self> {
        let mut lines = text.lines();

        // Header: everything up to &END (or a bare "/").
        let mut header = String::new();
        let mut saw_end = false;
        for line in lines.by_ref() {
            let upper = line.to_uppercase();
            let done = upper.contains("&END") || line.trim() == "/";
            header.push_str(&upper.replace("&END", " "));
            header.push(' ');
            if done {
                saw_end = true;
                break;
            }
        }
        if !saw_end {
            return Err(Error::Parse("missing &END terminator in namelist header".into()));
        }
        // Values may be padded with spaces (e.g. "NORB=  2"); strip all
        // whitespace once the namelist markers are gone.
        let header: String = header
            .replace("&FCI", " ")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let mut norb = None;
        let mut nelec = None;
        let mut ms2 = None;
        for token in header.split(',') {
            if let Some((key, value)) = token.split_once('=') {
                let slot = match key.trim() {
                    "NORB" => &mut norb,
                    "NELEC" => &mut nelec,
                    "MS2" => &mut ms2,
                    _ => continue,
                };
                *slot = Some(value.trim().parse::<i64>().map_err(|_| {
                    Error::Parse(format!("bad integer for {key}: {value:?}"))
                })?);
            }
        }
        let norb = norb.ok_or_else(|| Error::Parse("header missing NORB".into()))? as usize;
        let nelec = nelec.ok_or_else(|| Error::Parse("header missing NELEC".into()))? as usize;
        let ms2 = ms2.ok_or_else(|| Error::Parse("header missing MS2".into()))? as i32;
        if norb == 0 {
            return Err(Error::Parse("NORB must be positive".into()));
        }

        let mut table = Self {
            norb,
            nelec,
            ms2,
            core_energy: 0.0,
            one_body: vec![0.0; norb * norb],
            two_body: vec![0.0; norb.pow(4)],
        };
        let mut seen_one: HashSet<usize> = HashSet::new();
        let mut seen_two: HashSet<usize> = HashSet::new();
        let mut seen_core = false;

        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!(
                    "body line {}: expected 5 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let value: f64 = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("body line {}: bad value {:?}", lineno + 1, fields[0])))?;
            let idx: Vec<i64> = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("body line {}: bad index {f:?}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            for &x in &idx {
                if x < 0 || x as usize > norb {
                    return Err(Error::Index(format!(
                        "body line {}: index {x} outside 1..={norb}",
                        lineno + 1
                    )));
                }
            }
            if i == 0 && j == 0 && k == 0 && l == 0 {
                if seen_core && (table.core_energy - value).abs() > DUPLICATE_TOL {
                    return Err(Error::Consistency(format!(
                        "core energy given twice: {} vs {}",
                        table.core_energy, value
                    )));
                }
                table.core_energy = value;
                seen_core = true;
            } else if k == 0 && l == 0 {
                if i == 0 || j == 0 {
                    return Err(Error::Parse(format!(
                        "body line {}: one-electron entry with a zero orbital index",
                        lineno + 1
                    )));
                }
                let (p, q) = (i as usize - 1, j as usize - 1);
                let canon = p.min(q) * norb + p.max(q);
                let prior = table.one(p, q);
                if !seen_one.insert(canon) && (prior - value).abs() > DUPLICATE_TOL {
                    return Err(Error::Consistency(format!(
                        "one-electron ({i},{j}) given twice: {prior} vs {value}"
                    )));
                }
                table.set_one(p, q, value);
            } else {
                if i == 0 || j == 0 || k == 0 || l == 0 {
                    return Err(Error::Parse(format!(
                        "body line {}: two-electron entry with a zero orbital index",
                        lineno + 1
                    )));
                }
                let (p, q, r, s) = (i as usize - 1, j as usize - 1, k as usize - 1, l as usize - 1);
                let canon = canonical_two(norb, p, q, r, s);
                let prior = table.two(p, q, r, s);
                if !seen_two.insert(canon) && (prior - value).abs() > DUPLICATE_TOL {
                    return Err(Error::Consistency(format!(
                        "two-electron ({i}{j}|{k}{l}) given twice: {prior} vs {value}"
                    )));
                }
                table.set_two(p, q, r, s, value);
            }
        }
        Ok(table)
    }

    /// Serialize back to FCIDUMP text (symmetry-unique entries only).
    pub fn to_fcidump_string(&self) -> String {
        let n = self.norb;
        let mut out = String::new();
        let _ = writeln!(out, " &FCI NORB={:3},NELEC={:2},MS2={:2},", n, self.nelec, self.ms2);
        let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
        let _ = writeln!(out, "  ISYM=1,");
        let _ = writeln!(out, " &END");
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        if (p, q) < (r, s) {
                            continue;
                        }
                        let v = self.two(p, q, r, s);
                        if v != 0.0 {
                            let _ = writeln!(
                                out,
                                "{v:23.16E} {:3} {:3} {:3} {:3}",
                                p + 1,
                                q + 1,
                                r + 1,
                                s + 1
                            );
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..=p {
                let v = self.one(p, q);
                if v != 0.0 {
                    let _ = writeln!(out, "{v:23.16E} {:3} {:3}   0   0", p + 1, q + 1);
                }
            }
        }
        let _ = writeln!(out, "{:23.16E}   0   0   0   0", self.core_energy);
        out
    }

    pub fn set_core_energy(&mut self, value: f64) {
        self.core_energy = value;
    }

    /// Set `h(p,q)`, completing the symmetric partner.
    pub fn set_one(&mut self, p: usize, q: usize, value: f64) {
        let n = self.norb;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
    }

    /// Set `(pq|rs)`, completing the full 8-fold real-orbital orbit.
    pub fn set_two(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let n = self.norb;
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.two_body[((a * n + b) * n + c) * n + d] = value;
        }
    }
}

/// Canonical linear index of the 8-fold orbit of `(pq|rs)`.
fn canonical_two(norb: usize, p: usize, q: usize, r: usize, s: usize) -> usize {
    let pq = (p.max(q), p.min(q));
    let rs = (r.max(s), r.min(s));
    let ((a, b), (c, d)) = if pq >= rs { (pq, rs) } else { (rs, pq) };
    ((a * norb + b) * norb + c) * norb + d
}
