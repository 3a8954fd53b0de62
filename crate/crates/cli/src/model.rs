//! Model parameter bundles built from command-line flags.

use exitpair::extended::{
    AnglePairModel, MobiusMarginalParams, SenGuptaParams, ShiehJohnsonParams, ShiftedParams, VMCopulaParams,
};
use exitpair::{BCParams, BSParams, Complex64, OrthogonalMatrix};
use nalgebra::DVector;

use crate::args::{AngleModel, ModelArgs};
use crate::error::{CliError, CliResult};

fn require(v: Option<f64>, flag: &str, model: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("model {model} needs --{flag}")))
}

fn polar(abs: Option<f64>, arg: Option<f64>) -> Complex64 {
    Complex64::from_polar(abs.unwrap_or(0.0), arg.unwrap_or(0.0))
}

/// `Q` from a row-major entry list, or the identity.
pub fn orthogonal(entries: Option<&[f64]>, d: usize) -> CliResult<OrthogonalMatrix> {
    match entries {
        None => Ok(OrthogonalMatrix::identity(d)),
        Some(e) if e.len() == d * d => Ok(OrthogonalMatrix::from_row_slice(d, e)?),
        Some(e) => Err(CliError::usage(format!("--q needs {} entries for d = {d}, got {}", d * d, e.len()))),
    }
}

impl ModelArgs {
    pub fn psi(&self) -> Complex64 {
        polar(self.psi_abs, self.psi_arg)
    }

    /// Dimension from `--d`, else from the length of `--q` or `--xi`, else 2.
    fn dim(&self) -> usize {
        self.d
            .or_else(|| self.q.as_ref().map(|q| (q.len() as f64).sqrt().round() as usize))
            .or_else(|| self.xi.as_ref().map(|x| x.len()))
            .unwrap_or(2)
    }

    pub fn bs(&self, model: &str) -> CliResult<BSParams> {
        let d = self.dim();
        let rho = require(self.rho, "rho", model)?;
        Ok(BSParams::new(rho, orthogonal(self.q.as_deref(), d)?)?)
    }

    pub fn shifted(&self) -> CliResult<ShiftedParams> {
        let base = self.bs("shifted")?;
        let xi = self.xi.clone().ok_or_else(|| CliError::usage("model shifted needs --xi"))?;
        Ok(ShiftedParams::new(base.rho(), base.q().clone(), DVector::from_vec(xi))?)
    }

    pub fn bc(&self, plus: bool) -> CliResult<BCParams> {
        Ok(if plus { BCParams::plus(self.psi())? } else { BCParams::minus(self.psi())? })
    }

    pub fn mobius_marginal(&self) -> CliResult<MobiusMarginalParams> {
        Ok(MobiusMarginalParams::new(
            self.psi(),
            polar(self.alpha1_abs, self.alpha1_arg),
            polar(self.alpha2_abs, self.alpha2_arg),
        )?)
    }

    pub fn vm_copula(&self) -> CliResult<VMCopulaParams> {
        let m = "vm-copula";
        Ok(VMCopulaParams::new(
            require(self.mu1, "mu1", m)?,
            require(self.mu2, "mu2", m)?,
            require(self.kappa1, "kappa1", m)?,
            require(self.kappa2, "kappa2", m)?,
            self.psi(),
        )?)
    }

    pub fn sengupta(&self) -> CliResult<SenGuptaParams> {
        let m = self.m.as_ref().ok_or_else(|| CliError::usage("model sengupta needs --m with eight entries"))?;
        Ok(SenGuptaParams::from_free(m)?)
    }

    pub fn shieh_johnson(&self) -> CliResult<ShiehJohnsonParams> {
        let m = "shieh-johnson";
        Ok(ShiehJohnsonParams::new(
            [require(self.mu1, "mu1", m)?, require(self.mu2, "mu2", m)?, require(self.mu3, "mu3", m)?],
            [
                require(self.kappa1, "kappa1", m)?,
                require(self.kappa2, "kappa2", m)?,
                require(self.kappa3, "kappa3", m)?,
            ],
        )?)
    }

    pub fn angle_model(&self, model: AngleModel) -> CliResult<AnglePairModel> {
        Ok(match model {
            AngleModel::BcPlus => AnglePairModel::Bc(self.bc(true)?),
            AngleModel::BcMinus => AnglePairModel::Bc(self.bc(false)?),
            AngleModel::MobiusMarginal => AnglePairModel::MobiusMarginal(self.mobius_marginal()?),
            AngleModel::VmCopula => AnglePairModel::VmCopula(self.vm_copula()?),
            AngleModel::Sengupta => AnglePairModel::SenGupta(self.sengupta()?),
            AngleModel::ShiehJohnson => AnglePairModel::ShiehJohnson(self.shieh_johnson()?),
        })
    }
}
