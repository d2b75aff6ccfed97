//! CSV and key-value report writers for solver outputs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::Spectrum;
use crate::error::Result;
use crate::wave::{Grid, ProbeTrace, Snapshot};

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// `t,p`, one row per wave step.
pub fn write_probe_csv(path: &Path, trace: &ProbeTrace) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "t,p")?;
    for (i, p) in trace.pressures.iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e}", trace.t0 + i as f64 * trace.dt, p)?;
    }
    out.flush()?;
    Ok(())
}

/// One `x[,y],p` file per snapshot plus `snapshots.csv` listing
/// `index,t,file`. Returns every path written.
pub fn write_snapshots(dir: &Path, grid: &Grid, snapshots: &[Snapshot]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(snapshots.len() + 1);
    let index_path = dir.join("snapshots.csv");
    let mut index = create(&index_path)?;
    writeln!(index, "index,t,file")?;
    for (s, snap) in snapshots.iter().enumerate() {
        let name = format!("snapshot_{s:04}.csv");
        let path = dir.join(&name);
        let mut out = create(&path)?;
        if grid.dim == 1 {
            writeln!(out, "x,p")?;
        } else {
            writeln!(out, "x,y,p")?;
        }
        for (k, p) in snap.p.iter().enumerate() {
            let [x, y] = grid.coords(k);
            if grid.dim == 1 {
                writeln!(out, "{x:.16e},{p:.16e}")?;
            } else {
                writeln!(out, "{x:.16e},{y:.16e},{p:.16e}")?;
            }
        }
        out.flush()?;
        writeln!(index, "{s},{:.16e},{name}", snap.time)?;
        written.push(path);
    }
    index.flush()?;
    written.push(index_path);
    Ok(written)
}

/// `f,magnitude`
pub fn write_spectrum_csv(path: &Path, spec: &Spectrum) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "f,magnitude")?;
    for (k, m) in spec.magnitudes.iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e}", spec.frequency(k), m)?;
    }
    out.flush()?;
    Ok(())
}

/// Flat `key = value` lines.
pub fn write_report(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut out = create(path)?;
    for (k, v) in entries {
        writeln!(out, "{k} = {v}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WaveSpec;
    use crate::wave::build_grid;

    #[test]
    fn probe_and_snapshot_files() {
        let dir = tempfile::tempdir().unwrap();
        let tr = ProbeTrace {
            node: 3,
            location: [0.1, 0.0],
            t0: 0.0,
            dt: 0.5,
            pressures: vec![1.0, -2.5],
        };
        let p = dir.path().join("probe_0.csv");
        write_probe_csv(&p, &tr).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,p");
        let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row, vec![0.5, -2.5]);

        let g = build_grid(&WaveSpec {
            nodes: [4, 3],
            ..WaveSpec::default()
        })
        .unwrap();
        let snaps = vec![Snapshot {
            time: 1e-5,
            p: vec![0.25; g.len()],
        }];
        let files = write_snapshots(&dir.path().join("snaps"), &g, &snaps).unwrap();
        assert_eq!(files.len(), 2);
        let body = std::fs::read_to_string(&files[0]).unwrap();
        assert!(body.starts_with("x,y,p\n"));
        assert_eq!(body.lines().count(), g.len() + 1);
        let index = std::fs::read_to_string(&files[1]).unwrap();
        assert!(index.contains("snapshot_0000.csv"));

        let rp = dir.path().join("nested/report.txt");
        write_report(&rp, &[("steps".into(), "3".into())]).unwrap();
        assert_eq!(std::fs::read_to_string(&rp).unwrap(), "steps = 3\n");
    }
}
