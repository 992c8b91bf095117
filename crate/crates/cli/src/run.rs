use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wco_core::draws::draw_family_params;
use wco_core::operators::{ResidualReport, Verdict};
use wco_core::theorems::{certify_theorem, CertificateReport, FamilyParams, TheoremError};
use wco_core::CheckConfig;

use crate::config::{ClassifyConfig, InputError, ParamSource, RunConfig};
use crate::report::{DrawResult, ReportDocument};

/// Certifies one parameter set. Parameters the family constructors reject
/// become a failing `constructor` check; unparsable input is an error.
fn certify_one(index: usize, params: FamilyParams, rejections: usize, order: usize, cfg: &CheckConfig) -> Result<DrawResult, InputError> {
    match certify_theorem(&params, order, cfg) {
        Ok(report) => Ok(DrawResult { index, rejections, error: None, report }),
        Err(TheoremError::Expr(e)) => Err(InputError::Symbol(e.to_string())),
        Err(TheoremError::Params(e)) => Err(InputError::Params(e)),
        Err(e) => Ok(DrawResult {
            index,
            rejections,
            error: Some(e.to_string()),
            report: CertificateReport {
                family: params.tag(),
                params,
                order,
                padding: None,
                conjugation: None,
                classification: None,
                checks: vec![ResidualReport::condition("constructor", false, f64::INFINITY, 0.0)],
                verdict: Verdict::Fail,
            },
        }),
    }
}

/// Draws are generated in order from one seeded stream, certified in
/// parallel, and reported in draw order.
pub fn certify(config: &RunConfig) -> Result<ReportDocument, InputError> {
    config.validate()?;
    let start = Instant::now();
    let cfg = config.check_config();
    let jobs: Vec<(FamilyParams, usize)> = match &config.source {
        ParamSource::Explicit(params) => vec![(params.clone(), 0)],
        ParamSource::Draws(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            (0..*count)
                .map(|_| draw_family_params(config.family, &mut rng, config.safety_radius))
                .collect::<Result<_, _>>()
                .map_err(InputError::Config)?
        }
    };
    let results = jobs
        .into_par_iter()
        .enumerate()
        .map(|(index, (params, rejections))| certify_one(index, params, rejections, config.order, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let echo = serde_json::to_value(config).expect("configuration serializes");
    Ok(ReportDocument::new("certify", echo, results, start.elapsed().as_secs_f64()))
}

pub fn classify(config: &ClassifyConfig) -> Result<ReportDocument, InputError> {
    config.validate()?;
    let start = Instant::now();
    let cfg = CheckConfig::default().with_tolerance(config.tolerance);
    let params = FamilyParams::Algebraic { psi: config.psi.clone(), phi: config.phi.clone() };
    let result = certify_one(0, params, 0, config.order, &cfg)?;
    let echo = serde_json::to_value(config).expect("configuration serializes");
    Ok(ReportDocument::new("classify", echo, vec![result], start.elapsed().as_secs_f64()))
}
