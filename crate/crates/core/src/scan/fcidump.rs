//! FCIDUMP reading and writing.
//!
//! The accepted layout is the common convention: a namelist header carrying
//! NORB, NELEC and MS2, terminated by a line containing `&END` or `/`, then
//! `value i j k l` records with 1-based indices in chemists' notation —
//! `i j 0 0` for one-electron integrals and `0 0 0 0` for the core energy.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::detci::MoIntegrals;
use crate::error::{Error, Result};
use crate::integrals::EriTensor;

/// Header fields of an FCIDUMP file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcidumpMetadata {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i32,
    pub core_energy: f64,
}

fn find_header_int(header: &str, key: &'static str) -> Result<i64> {
    let upper = header.to_ascii_uppercase();
    let start = upper.find(key).ok_or(Error::FcidumpMissingKey(key))?;
    let rest = &upper[start + key.len()..];
    let rest = rest.trim_start();
    let rest = rest
        .strip_prefix('=')
        .ok_or(Error::FcidumpMissingKey(key))?
        .trim_start();
    let end = rest
        .find(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+'))
        .unwrap_or(rest.len());
    rest[..end]
        .parse()
        .map_err(|_| Error::FcidumpMissingKey(key))
}

/// Canonical representative of the 8-fold ERI symmetry class.
fn canonical(i: usize, j: usize, k: usize, l: usize) -> (usize, usize, usize, usize) {
    let ij = if i <= j { (i, j) } else { (j, i) };
    let kl = if k <= l { (k, l) } else { (l, k) };
    if ij <= kl {
        (ij.0, ij.1, kl.0, kl.1)
    } else {
        (kl.0, kl.1, ij.0, ij.1)
    }
}

/// Parse an FCIDUMP file into dense restricted MO integrals plus metadata.
pub fn read_fcidump(path: &Path) -> Result<(MoIntegrals, FcidumpMetadata)> {
    let text = fs::read_to_string(path)?;
    let mut header = String::new();
    let mut data_start = 0;
    let mut found_end = false;
    for (idx, line) in text.lines().enumerate() {
        let upper = line.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            header.push_str(&line[..pos]);
            data_start = idx + 1;
            found_end = true;
            break;
        }
        if let Some(pos) = upper.find('/') {
            header.push_str(&line[..pos]);
            data_start = idx + 1;
            found_end = true;
            break;
        }
        header.push_str(line);
        header.push(' ');
    }
    if !found_end {
        return Err(Error::Fcidump {
            line: 1,
            msg: "header never terminated by '&END' or '/'".into(),
        });
    }

    let n_orb = find_header_int(&header, "NORB")? as usize;
    let n_elec = find_header_int(&header, "NELEC")? as usize;
    let ms2 = find_header_int(&header, "MS2")? as i32;
    if n_orb == 0 || n_orb > 32 {
        return Err(Error::Fcidump {
            line: 1,
            msg: format!("NORB={n_orb} out of supported range 1..=32"),
        });
    }

    let mut core: Option<f64> = None;
    let mut one: HashMap<(usize, usize), f64> = HashMap::new();
    let mut two: HashMap<(usize, usize, usize, usize), f64> = HashMap::new();

    for (idx, line) in text.lines().enumerate().skip(data_start) {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Fcidump {
                line: line_no,
                msg: format!("expected 'value i j k l', got '{trimmed}'"),
            });
        }
        let value: f64 = fields[0].parse().map_err(|_| Error::Fcidump {
            line: line_no,
            msg: format!("cannot parse value '{}'", fields[0]),
        })?;
        let mut ix = [0usize; 4];
        for (slot, f) in fields[1..].iter().enumerate() {
            ix[slot] = f.parse().map_err(|_| Error::Fcidump {
                line: line_no,
                msg: format!("cannot parse index '{f}'"),
            })?;
        }
        for &i in &ix {
            if i > n_orb {
                return Err(Error::Fcidump {
                    line: line_no,
                    msg: format!("index {i} exceeds NORB={n_orb} in record '{trimmed}'"),
                });
            }
        }
        match ix {
            [0, 0, 0, 0] => {
                if let Some(prev) = core {
                    if (prev - value).abs() > 1e-10 {
                        return Err(Error::Fcidump {
                            line: line_no,
                            msg: format!("conflicting core energy {prev} vs {value}"),
                        });
                    }
                }
                core = Some(value);
            }
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let key = if i <= j { (i, j) } else { (j, i) };
                if let Some(prev) = one.get(&key) {
                    if (prev - value).abs() > 1e-10 {
                        return Err(Error::Fcidump {
                            line: line_no,
                            msg: format!(
                                "conflicting one-electron record ({i},{j}): {prev} vs {value}"
                            ),
                        });
                    }
                }
                one.insert(key, value);
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let key = canonical(i, j, k, l);
                if let Some(prev) = two.get(&key) {
                    if (prev - value).abs() > 1e-10 {
                        return Err(Error::Fcidump {
                            line: line_no,
                            msg: format!(
                                "conflicting two-electron record ({i},{j}|{k},{l}): {prev} vs {value}"
                            ),
                        });
                    }
                }
                two.insert(key, value);
            }
            _ => {
                return Err(Error::Fcidump {
                    line: line_no,
                    msg: format!("unsupported index pattern in record '{trimmed}'"),
                });
            }
        }
    }

    let mut h = DMatrix::zeros(n_orb, n_orb);
    for (&(i, j), &v) in &one {
        h[(i - 1, j - 1)] = v;
        h[(j - 1, i - 1)] = v;
    }
    let mut eri = EriTensor::zeros(n_orb);
    for (&(i, j, k, l), &v) in &two {
        let (a, b, c, d) = (i - 1, j - 1, k - 1, l - 1);
        for (p, q, r, s) in [
            (a, b, c, d),
            (b, a, c, d),
            (a, b, d, c),
            (b, a, d, c),
            (c, d, a, b),
            (d, c, a, b),
            (c, d, b, a),
            (d, c, b, a),
        ] {
            eri.set(p, q, r, s, v);
        }
    }

    Ok((
        MoIntegrals::Restricted { n: n_orb, h, eri },
        FcidumpMetadata {
            n_orb,
            n_elec,
            ms2,
            core_energy: core.unwrap_or(0.0),
        },
    ))
}

/// Write restricted MO integrals as an FCIDUMP file; only the unique
/// representatives of each symmetry class are emitted.
pub fn write_fcidump(
    path: &Path,
    mo: &MoIntegrals,
    core_energy: f64,
    n_elec: usize,
    ms2: i32,
) -> Result<()> {
    let (n, h, eri) = match mo {
        MoIntegrals::Restricted { n, h, eri } => (*n, h, eri),
        MoIntegrals::Unrestricted { .. } => {
            return Err(Error::InvalidConfig(
                "FCIDUMP output requires restricted MO integrals".into(),
            ))
        }
    };
    let orbsym = vec!["1"; n].join(",");
    let mut out = format!(
        "&FCI NORB={n},NELEC={n_elec},MS2={ms2},\n  ORBSYM={orbsym},\n  ISYM=1,\n&END\n"
    );
    for i in 0..n {
        for j in 0..=i {
            for k in 0..=i {
                let l_max = if k == i { j } else { k };
                for l in 0..=l_max {
                    let v = eri.get(i, j, k, l);
                    if v != 0.0 {
                        out.push_str(&format!(
                            "{:24.16E} {:3} {:3} {:3} {:3}\n",
                            v,
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1
                        ));
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = h[(i, j)];
            if v != 0.0 {
                out.push_str(&format!(
                    "{:24.16E} {:3} {:3} {:3} {:3}\n",
                    v,
                    i + 1,
                    j + 1,
                    0,
                    0
                ));
            }
        }
    }
    out.push_str(&format!("{core_energy:24.16E} {:3} {:3} {:3} {:3}\n", 0, 0, 0, 0));
    fs::write(path, out)?;
    Ok(())
}
