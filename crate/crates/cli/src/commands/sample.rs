use exitpair::bc::bc_sample;
use exitpair::bs::bs_sample;
use exitpair::extended::{cylinder_sample, mobius_marginal_sample, plane_sample, shifted_sample, vm_copula_sample};
use exitpair::math::wrap_angle;
use exitpair::{CirclePairSample, PairSample, RngStream};
use serde::Serialize;
use std::fmt::Write as _;

use crate::args::{Cli, ModelArgs, SampleArgs, SampleModel};
use crate::error::{CliError, CliResult};
use crate::report::{sidecar_path, write_file, Reporter};

#[derive(Serialize)]
struct SampleSidecar<'a> {
    model: SampleModel,
    n: usize,
    columns: Vec<String>,
    params: &'a ModelArgs,
    output: String,
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        write!(out, "{v:.16e}").unwrap();
    }
    out.push('\n');
}

fn vector_table(s: &PairSample) -> (Vec<String>, String) {
    let d = s.dim();
    let columns: Vec<String> = (1..=d).map(|i| format!("u{i}")).chain((1..=d).map(|i| format!("v{i}"))).collect();
    let mut body = String::new();
    for (u, v) in s.pairs() {
        push_row(&mut body, u.as_slice().iter().chain(v.as_slice()).copied());
    }
    (columns, body)
}

fn angle_table(s: &CirclePairSample) -> (Vec<String>, String) {
    pair_table(&["theta_u", "theta_v"], s.pairs().iter().map(|(u, v)| (wrap_angle(u.arg()), wrap_angle(v.arg()))))
}

fn pair_table(names: &[&str; 2], rows: impl Iterator<Item = (f64, f64)>) -> (Vec<String>, String) {
    let mut body = String::new();
    for (a, b) in rows {
        push_row(&mut body, [a, b]);
    }
    (names.iter().map(|s| s.to_string()).collect(), body)
}

pub fn run(cli: &Cli, a: &SampleArgs) -> CliResult<()> {
    let reporter = Reporter::new(cli, "sample");
    if a.n == 0 {
        return Err(CliError::usage("sample size must be positive"));
    }
    let mut rng = RngStream::new(cli.seed, 0);
    let p = &a.params;
    let (columns, body) = match a.model {
        SampleModel::Bs => vector_table(&bs_sample(&p.bs("bs")?, a.n, &mut rng)),
        SampleModel::Shifted => vector_table(&shifted_sample(&p.shifted()?, a.n, &mut rng)),
        SampleModel::BcPlus => angle_table(&bc_sample(&p.bc(true)?, a.n, &mut rng)),
        SampleModel::BcMinus => angle_table(&bc_sample(&p.bc(false)?, a.n, &mut rng)),
        SampleModel::MobiusMarginal => angle_table(&mobius_marginal_sample(&p.mobius_marginal()?, a.n, &mut rng)),
        SampleModel::VmCopula => {
            pair_table(&["theta_u", "theta_v"], vm_copula_sample(&p.vm_copula()?, a.n, &mut rng)?.into_iter())
        }
        SampleModel::Plane => pair_table(&["x", "y"], plane_sample(p.psi(), a.n, &mut rng)?.into_iter()),
        SampleModel::Cylinder => pair_table(
            &["theta", "x"],
            cylinder_sample(p.psi(), a.n, &mut rng)?.into_iter().map(|(z, x)| (wrap_angle(z.arg()), x)),
        ),
    };
    let mut text = columns.join(",");
    text.push('\n');
    text.push_str(&body);
    write_file(&a.out, &text)?;
    let sidecar = SampleSidecar { model: a.model, n: a.n, columns, params: p, output: a.out.display().to_string() };
    reporter.emit(&sidecar, Some(&sidecar_path(&a.out)))
}
