use num_traits::Zero;
use pbc_core::ball::{antipodal_pairing, ball_counts, build_ball_capped, close_ball, random_cover};
use pbc_core::diagnostics::{ensemble_convergence, gap_report_against, girth, sample_seed, EnsembleSpec};
use pbc_core::graph::{
    covering_map_check, lego_expand, parse_jacobi_graph, spanning_tree, EdgeSet, FiniteGraph, RoseCover,
};
use pbc_core::group::{
    congruence_quotient, free_generator_images, homogeneity_check, injectivity_radius, tower_covering_map,
    GeneratorImages, Radius,
};
use pbc_core::jacobi::{assemble_matrix, JacobiData, MomentVector, RoseParams};
use pbc_core::rational::{format_sig12, to_f64, to_fraction_string};
use pbc_core::tree_dos::{dos_moments, rose_dos_moments};
use pbc_core::Rational;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig, Family};
use crate::{RunError, Table};

type Result<T> = std::result::Result<T, RunError>;

pub(crate) fn compute(c: &ExperimentConfig) -> Result<Vec<Table>> {
    match c.experiment {
        Experiment::Q0Sweep => q0_sweep(c),
        Experiment::RandomSweep => random_sweep(c),
        Experiment::Tower => tower(c),
        Experiment::LegoDemo => lego_demo(c),
        Experiment::DosTable => dos_table(c),
    }
}

fn exact(x: &Rational) -> String {
    to_fraction_string(x)
}

fn float(x: &Rational) -> String {
    format_sig12(to_f64(x))
}

fn rose_params(c: &ExperimentConfig) -> Result<RoseParams> {
    Ok(RoseParams::new(
        c.b.0.clone(),
        c.a.iter().map(|f| f.0.clone()).collect(),
    )?)
}

fn check_ball_size(ell: usize, r: usize, copies: usize, cap: usize) -> Result<()> {
    let need = ball_counts(ell, r)?.vertices.saturating_mul(copies as u128);
    if need > cap as u128 {
        return Err(RunError::Cap(format!(
            "radius {r} needs {need} vertices, over the cap of {cap}"
        )));
    }
    Ok(())
}

fn antipodal(ell: usize, r: usize, cap: usize) -> Result<RoseCover> {
    let ball = build_ball_capped(ell, r, cap)?;
    Ok(close_ball(&ball, &antipodal_pairing(&ball))?)
}

fn q0_sweep(c: &ExperimentConfig) -> Result<Vec<Table>> {
    let params = rose_params(c)?;
    let dos = rose_dos_moments(&params, c.k);
    let radii = c.r.expect("validated");
    for r in radii.iter() {
        check_ball_size(c.ell, r, 1, c.cap_vertices)?;
    }
    let mut header = vec!["ell".to_string(), "r".into(), "vertices".into()];
    for k in 2..=c.k {
        header.extend([format!("m{k}"), format!("gap{k}"), format!("gap{k}_float")]);
    }
    let mut table = Table::new("q0_sweep.csv", header);
    for r in radii.iter() {
        let cover = antipodal(c.ell, r, c.cap_vertices)?;
        let data = JacobiData::lift_rose(&cover, &params)?;
        let h = assemble_matrix(&*cover, &data)?;
        let moments: Vec<Rational> = if c.k == 2 {
            vec![Rational::zero(), Rational::zero(), h.second_moment()]
        } else {
            h.trace_moments(c.k).as_slice().to_vec()
        };
        let mut row = vec![c.ell.to_string(), r.to_string(), cover.vertex_count().to_string()];
        for (k, m) in moments.iter().enumerate().skip(2) {
            let gap = m - dos.get(k);
            row.extend([exact(m), exact(&gap), float(&gap)]);
        }
        table.push(row);
    }
    Ok(vec![table])
}

fn random_sweep(c: &ExperimentConfig) -> Result<Vec<Table>> {
    let ensemble = EnsembleSpec {
        params: rose_params(c)?,
        radii: c.r.expect("validated").iter().collect(),
        max_k: c.k,
        samples: c.samples,
        master_seed: c.seed.expect("validated"),
        cap: c.cap_vertices,
        bad_m: c.m.clone(),
    };
    let report = ensemble_convergence(&ensemble)?;
    let ell = c.ell.to_string();

    let mut conv = Table::new("convergence.csv", ["ell", "r", "seed", "k", "gap_exact", "gap_float"]);
    let mut bad = Table::new("badfrac.csv", ["ell", "r", "m", "seed", "fraction"]);
    for row in &report.rows {
        if !row.gaps[0].is_zero() {
            return Err(RunError::Invariant(format!("nonzero 0th gap for seed {}", row.seed)));
        }
        for (k, gap) in row.gaps.iter().enumerate() {
            conv.push(vec![
                ell.clone(),
                row.r.to_string(),
                row.seed.to_string(),
                k.to_string(),
                exact(gap),
                float(gap),
            ]);
        }
        for (m, fraction) in &row.bad_fractions {
            bad.push(vec![
                ell.clone(),
                row.r.to_string(),
                m.to_string(),
                row.seed.to_string(),
                exact(fraction),
            ]);
        }
    }

    let mut summary = Table::new(
        "summary.csv",
        ["ell", "r", "samples", "k", "mean_abs_gap", "mean_abs_gap_float", "max_abs_gap", "max_abs_gap_float"],
    );
    for s in &report.summaries {
        for k in 0..=c.k {
            summary.push(vec![
                ell.clone(),
                s.r.to_string(),
                s.samples.to_string(),
                k.to_string(),
                exact(&s.mean_abs_gap[k]),
                float(&s.mean_abs_gap[k]),
                exact(&s.max_abs_gap[k]),
                float(&s.max_abs_gap[k]),
            ]);
        }
    }
    Ok(vec![conv, bad, summary])
}

fn tower(c: &ExperimentConfig) -> Result<Vec<Table>> {
    let gens = free_generator_images(c.ell)?;
    let params = rose_params(c)?;
    let dos = rose_dos_moments(&params, c.k);
    let levels = c.n.expect("validated");
    let quotient = |n: usize| -> Result<_> {
        let n = u32::try_from(n).map_err(|_| RunError::Config(format!("level {n} too large")))?;
        Ok(congruence_quotient(&gens, n, c.cap_vertices)?)
    };

    let mut header: Vec<String> = ["ell", "n", "size", "injectivity_radius", "girth", "homogeneous", "covers_previous"]
        .map(String::from)
        .to_vec();
    header.extend((0..=c.k).map(|k| format!("gap{k}")));
    let mut table = Table::new("tower.csv", header);

    let mut prev = if levels.start > 1 { Some(quotient(levels.start - 1)?) } else { None };
    for n in levels.iter() {
        let q = quotient(n)?;
        let data = JacobiData::lift_rose(&q.cover, &params)?;
        let rho = injectivity_radius(&gens, q.n, usize::MAX);
        let g = girth(&q.cover);
        let homogeneous = homogeneity_check(&q.cover, &data, c.k)?;
        let covers = match &prev {
            Some(lower) => covering_map_check(&tower_covering_map(&q, lower)?),
            None => covering_map_check(&q.cover.projection_to_rose()),
        };
        let report = gap_report_against(&*q.cover, &data, &dos)?;

        let breach = |what: String| Err(RunError::Invariant(format!("level {n}: {what}")));
        let Radius::Exact(rho) = rho else {
            return breach("no relation found".into());
        };
        if g != Some(rho) {
            return breach(format!("girth {g:?} differs from injectivity radius {rho}"));
        }
        if !homogeneous || !covers {
            return breach("quotient is not a homogeneous cover of the level below".into());
        }
        if let Some(k) = (0..rho.min(c.k + 1)).find(|&k| !report.gaps[k].is_zero()) {
            return breach(format!("moment {k} differs from the tree below the girth"));
        }

        let mut row = vec![
            c.ell.to_string(),
            n.to_string(),
            q.len().to_string(),
            rho.to_string(),
            g.map_or_else(String::new, |g| g.to_string()),
            homogeneous.to_string(),
            covers.to_string(),
        ];
        row.extend(report.gaps.iter().map(exact));
        table.push(row);
        prev = Some(q);
    }
    Ok(vec![table])
}

fn lego_demo(c: &ExperimentConfig) -> Result<Vec<Table>> {
    let path = c.graph.as_ref().expect("validated");
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
    let (pattern, data) = parse_jacobi_graph(&text)?;
    let tree = spanning_tree(&pattern);
    let ell = tree.rank();
    let p = pattern.vertex_count();
    let dos = dos_moments(&pattern, &data, c.k)?;

    // (level, seed) per cover, in output order
    let jobs: Vec<(usize, Option<u64>)> = match c.family {
        Family::Q0 => c.r.expect("validated").iter().map(|r| (r, None)).collect(),
        Family::Random => {
            let seed = c.seed.expect("validated");
            c.r.expect("validated")
                .iter()
                .flat_map(|r| (0..c.samples).map(move |i| (r, Some(sample_seed(seed, r, i)))))
                .collect()
        }
        Family::Congruence => c.n.expect("validated").iter().map(|n| (n, None)).collect(),
    };
    let gens: Option<GeneratorImages> = match c.family {
        Family::Congruence => Some(free_generator_images(ell)?),
        _ => {
            for &(r, _) in &jobs {
                check_ball_size(ell, r, p, c.cap_vertices)?;
            }
            None
        }
    };
    let cover_cap = c.cap_vertices / p.max(1);

    let rows = jobs
        .par_iter()
        .map(|&(level, seed)| -> Result<Vec<Vec<String>>> {
            let cover = match (c.family, seed) {
                (Family::Q0, _) => antipodal(ell, level, cover_cap)?,
                (Family::Random, Some(s)) => random_cover(ell, level, s, cover_cap)?,
                _ => {
                    let n = u32::try_from(level).map_err(|_| RunError::Config(format!("level {level} too large")))?;
                    congruence_quotient(gens.as_ref().expect("congruence"), n, cover_cap)?.cover
                }
            };
            let lego = lego_expand(&cover, &pattern, &tree, &data)?;
            if !covering_map_check(&lego.covering) {
                return Err(RunError::Invariant(format!("expansion at level {level} is not a cover")));
            }
            let report = gap_report_against(&lego.graph, &lego.jacobi, &dos)?;
            Ok(report
                .gaps
                .iter()
                .enumerate()
                .map(|(k, gap)| {
                    vec![
                        family_name(c.family).to_string(),
                        level.to_string(),
                        seed.map_or_else(String::new, |s| s.to_string()),
                        lego.copies.to_string(),
                        lego.graph.vertex_count().to_string(),
                        k.to_string(),
                        exact(report.cover_moments.get(k)),
                        exact(gap),
                        float(gap),
                    ]
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "lego.csv",
        ["family", "level", "seed", "copies", "vertices", "k", "moment_exact", "gap_exact", "gap_float"],
    );
    rows.into_iter().flatten().for_each(|row| table.push(row));
    Ok(vec![table, moment_table("pattern_dos.csv", &dos)])
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Q0 => "q0",
        Family::Random => "random",
        Family::Congruence => "congruence",
    }
}

fn dos_table(c: &ExperimentConfig) -> Result<Vec<Table>> {
    let moments = match &c.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
            let (g, data): (FiniteGraph, JacobiData) = parse_jacobi_graph(&text)?;
            dos_moments(&g, &data, c.k)?
        }
        None => rose_dos_moments(&rose_params(c)?, c.k),
    };
    Ok(vec![moment_table("dos.csv", &moments)])
}

fn moment_table(file: &'static str, m: &MomentVector) -> Table {
    let mut t = Table::new(file, ["k", "moment_exact", "moment_float"]);
    for (k, x) in m.as_slice().iter().enumerate() {
        t.push(vec![k.to_string(), exact(x), float(x)]);
    }
    t
}
