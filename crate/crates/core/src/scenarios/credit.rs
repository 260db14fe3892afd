//! Synthetic credit-application data and the engineered-feature map used by
//! the pipeline scenario.
//!
//! Every attribute below is an invented stand-in for a mortgage-application
//! table. Only `age` and `economy_level` are meant to match real attribute
//! names. Rows are drawn independently:
//!
//! | column | kind | draw |
//! |---|---|---|
//! | `age` | numeric | `round(clip(N(44, 11), 21, 75))` |
//! | `economy_level` | nominal | latent `e ~ N(0,1)` cut at −1.0, −0.3, 0.5, 1.3 |
//! | `monthly_income` | numeric | `exp(7.8 + 0.2 e + 0.2 z)` |
//! | `employment_years` | numeric | `round(clip(N(8, 6), 0, age − 18))` |
//! | `employment_type` | nominal | salaried .55, self_employed .15, public_sector .15, temporary .10, retired .05 |
//! | `property_value` | numeric | `exp(N(12.1, 0.25))` |
//! | `loan_amount` | numeric | `exp(N(11.8, 0.2))` |
//! | `loan_term_months` | numeric | uniform over {120, 180, 240, 300} |
//! | `interest_rate` | numeric | `clip(N(3, 0.6), 1, 6)`, percent per year |
//! | `existing_debt_payment` | numeric | `max(N(200, 120), 0)` |
//! | `credit_history_months` | numeric | `round(12 (age − 18) · U(0.2, 1))` |
//! | `num_credit_lines` | numeric | `round(clip(N(3, 1.5), 0, 10))` |
//! | `recent_inquiries` | numeric | `Poisson(1)` |
//! | `savings_balance` | numeric | `income · exp(N(1, 0.5))` |
//! | `dependents` | numeric | `round(clip(N(1.2, 1.1), 0, 5))` |
//! | `marital_status` | nominal | single, married, divorced, widowed |
//! | `housing_status` | nominal | renting, owner, family |
//! | `region` | nominal | north, south, east, west, central |
//! | `co_borrower` | nominal | no, yes |
//!
//! Normal draws use a standard normal clipped to ±2.5 before scaling. The
//! money attributes are drawn nearly independently of each other so the rows
//! spread over the bounding box instead of lying on a thin ridge.
//!
//! The default label comes from a sparse risk score. With the monthly
//! annuity payment `P = L r / (1 − (1 + r)^−T)` (`r` = rate / 1200,
//! `T` = term), debt service `dti = (P + debt) / income`, `ltv = loan /
//! property`, `a = (dti − 0.40) / 0.12`, `b = (ltv − 0.75) / 0.25`,
//! `c = (age − 44) / 10`, history ratio `h = history / (12 (age − 18))`,
//! `hz = (h − 0.6) / 0.23` and `q` = recent inquiries:
//!
//! ```text
//! s = a + 0.5 a b + 1.6 (c² − 1) − 0.5 hz + 0.35 (q − 1) + noise · N(0, 1)
//! ```
//!
//! The `round(default_rate · n)` rows with the highest score are labeled
//! `default`, so the prevalence matches the requested rate up to rounding.
//! There is no retry: if either class would end up with fewer than two rows
//! the generator returns an error.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{FeatureSpec, LabeledDataset};
use crate::rng::{self, Purpose, StreamRng};
use crate::{Error, Matrix, Result};

/// Number of raw attributes produced by the generator.
pub const CREDIT_DIM: usize = 19;

pub const ECONOMY_LEVELS: [&str; 5] = ["low", "lower_middle", "middle", "upper_middle", "high"];
const EMPLOYMENT_TYPES: [&str; 5] = ["salaried", "self_employed", "public_sector", "temporary", "retired"];
const MARITAL: [&str; 4] = ["single", "married", "divorced", "widowed"];
const HOUSING: [&str; 3] = ["renting", "owner", "family"];
const REGIONS: [&str; 5] = ["north", "south", "east", "west", "central"];
const YES_NO: [&str; 2] = ["no", "yes"];

/// Class names in label order.
pub const CLASS_NAMES: [&str; 2] = ["repaid", "default"];

pub mod col {
    pub const AGE: usize = 0;
    pub const ECONOMY_LEVEL: usize = 1;
    pub const MONTHLY_INCOME: usize = 2;
    pub const EMPLOYMENT_YEARS: usize = 3;
    pub const EMPLOYMENT_TYPE: usize = 4;
    pub const PROPERTY_VALUE: usize = 5;
    pub const LOAN_AMOUNT: usize = 6;
    pub const LOAN_TERM_MONTHS: usize = 7;
    pub const INTEREST_RATE: usize = 8;
    pub const EXISTING_DEBT_PAYMENT: usize = 9;
    pub const CREDIT_HISTORY_MONTHS: usize = 10;
    pub const NUM_CREDIT_LINES: usize = 11;
    pub const RECENT_INQUIRIES: usize = 12;
    pub const SAVINGS_BALANCE: usize = 13;
    pub const DEPENDENTS: usize = 14;
    pub const MARITAL_STATUS: usize = 15;
    pub const HOUSING_STATUS: usize = 16;
    pub const REGION: usize = 17;
    pub const CO_BORROWER: usize = 18;
}

pub fn credit_schema() -> Vec<FeatureSpec> {
    alloc::vec![
        FeatureSpec::numeric("age"),
        FeatureSpec::nominal("economy_level", &ECONOMY_LEVELS),
        FeatureSpec::numeric("monthly_income"),
        FeatureSpec::numeric("employment_years"),
        FeatureSpec::nominal("employment_type", &EMPLOYMENT_TYPES),
        FeatureSpec::numeric("property_value"),
        FeatureSpec::numeric("loan_amount"),
        FeatureSpec::numeric("loan_term_months"),
        FeatureSpec::numeric("interest_rate"),
        FeatureSpec::numeric("existing_debt_payment"),
        FeatureSpec::numeric("credit_history_months"),
        FeatureSpec::numeric("num_credit_lines"),
        FeatureSpec::numeric("recent_inquiries"),
        FeatureSpec::numeric("savings_balance"),
        FeatureSpec::numeric("dependents"),
        FeatureSpec::nominal("marital_status", &MARITAL),
        FeatureSpec::nominal("housing_status", &HOUSING),
        FeatureSpec::nominal("region", &REGIONS),
        FeatureSpec::nominal("co_borrower", &YES_NO),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CreditGenConfig {
    pub n_rows: usize,
    pub default_rate: f64,
    pub seed: u64,
    /// Must equal [`CREDIT_DIM`]; kept so configs state the width explicitly.
    pub d_raw: usize,
    /// Scale of the Gaussian noise added to the risk score.
    pub noise: f64,
}

impl Default for CreditGenConfig {
    fn default() -> Self {
        Self {
            n_rows: 1328,
            default_rate: 0.23,
            seed: 0,
            d_raw: CREDIT_DIM,
            noise: 1.8,
        }
    }
}

impl CreditGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 {
            return Err(Error::InvalidConfig("n_rows must be at least 1".into()));
        }
        if !(self.default_rate > 0.0 && self.default_rate < 1.0) {
            return Err(Error::InvalidConfig("default_rate must lie in (0, 1)".into()));
        }
        if self.d_raw != CREDIT_DIM {
            return Err(Error::InvalidConfig(alloc::format!(
                "d_raw must be {CREDIT_DIM}, got {}",
                self.d_raw
            )));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::InvalidConfig("noise must be a finite nonnegative number".into()));
        }
        Ok(())
    }
}

fn z(rng: &mut StreamRng) -> f64 {
    let v: f64 = StandardNormal.sample(rng);
    v.clamp(-2.5, 2.5)
}

fn normal(rng: &mut StreamRng, mean: f64, sd: f64) -> f64 {
    mean + sd * z(rng)
}

fn weighted(rng: &mut StreamRng, weights: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Monthly annuity payment for `loan` at `rate_pct` percent per year over `term` months.
pub fn annuity_payment(loan: f64, rate_pct: f64, term: f64) -> f64 {
    let r = rate_pct / 1200.0;
    if r <= 0.0 {
        return loan / term.max(1.0);
    }
    loan * r / (1.0 - libm::pow(1.0 + r, -term.max(1.0)))
}

/// History length as a fraction of adult lifetime.
pub fn history_ratio(history_months: f64, age: f64) -> f64 {
    history_months / (12.0 * (age - 18.0)).max(12.0)
}

fn draw_row(rng: &mut StreamRng, row: &mut [f64]) {
    let age = libm::round(normal(rng, 44.0, 11.0).clamp(21.0, 75.0));
    let e = z(rng);
    let economy = [-1.0, -0.3, 0.5, 1.3].iter().filter(|&&t| e > t).count();
    let income = libm::exp(7.8 + 0.2 * e + 0.2 * z(rng));
    let employment_years = libm::round(normal(rng, 8.0, 6.0).clamp(0.0, age - 18.0));
    let employment_type = weighted(rng, &[0.55, 0.15, 0.15, 0.10, 0.05]);
    let property = libm::exp(normal(rng, 12.1, 0.25));
    let loan = libm::exp(normal(rng, 11.8, 0.2));
    let term = [120.0, 180.0, 240.0, 300.0][rng.random_range(0..4)];
    let rate = normal(rng, 3.0, 0.6).clamp(1.0, 6.0);
    let debt = normal(rng, 200.0, 120.0).max(0.0);
    let u: f64 = rng.random();
    let history = libm::round(12.0 * (age - 18.0) * (0.2 + 0.8 * u));
    let lines = libm::round(normal(rng, 3.0, 1.5).clamp(0.0, 10.0));
    let inquiries: f64 = Poisson::new(1.0).expect("positive rate").sample(rng);
    let savings = income * libm::exp(normal(rng, 1.0, 0.5));
    let dependents = libm::round(normal(rng, 1.2, 1.1).clamp(0.0, 5.0));
    let marital = weighted(rng, &[0.35, 0.45, 0.15, 0.05]);
    let housing = weighted(rng, &[0.4, 0.45, 0.15]);
    let region = rng.random_range(0..REGIONS.len());
    let co_borrower = weighted(rng, &[0.6, 0.4]);

    row.copy_from_slice(&[
        age,
        economy as f64,
        income,
        employment_years,
        employment_type as f64,
        property,
        loan,
        term,
        rate,
        debt,
        history,
        lines,
        inquiries,
        savings,
        dependents,
        marital as f64,
        housing as f64,
        region as f64,
        co_borrower as f64,
    ]);
}

/// Noise-free part of the risk score for one raw row.
pub fn risk_score(row: &[f64]) -> f64 {
    let payment = annuity_payment(row[col::LOAN_AMOUNT], row[col::INTEREST_RATE], row[col::LOAN_TERM_MONTHS]);
    let dti = (payment + row[col::EXISTING_DEBT_PAYMENT]) / row[col::MONTHLY_INCOME];
    let ltv = row[col::LOAN_AMOUNT] / row[col::PROPERTY_VALUE];
    let a = (dti - 0.40) / 0.12;
    let b = (ltv - 0.75) / 0.25;
    let c = (row[col::AGE] - 44.0) / 10.0;
    let hz = (history_ratio(row[col::CREDIT_HISTORY_MONTHS], row[col::AGE]) - 0.6) / 0.23;
    let q = row[col::RECENT_INQUIRIES];
    a + 0.5 * a * b + 1.6 * (c * c - 1.0) - 0.5 * hz + 0.35 * (q - 1.0)
}

/// Generates the credit-like table (label 1 = `default`).
pub fn generate_credit_like(cfg: &CreditGenConfig) -> Result<LabeledDataset> {
    cfg.validate()?;
    let n = cfg.n_rows;
    let n_default = libm::floor(cfg.default_rate * n as f64 + 0.5) as usize;
    if n_default < 2 || n - n_default < 2 {
        return Err(Error::Calibration(alloc::format!(
            "{n} rows at default rate {} leave {n_default} defaults and {} repaid; both need at least 2",
            cfg.default_rate,
            n - n_default
        )));
    }
    let mut rng = rng::substream(rng::derive_key(cfg.seed, Purpose::Generator), 0);
    let mut features = Matrix::zeros(n, CREDIT_DIM);
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        draw_row(&mut rng, features.row_mut(i));
        scores.push(risk_score(features.row(i)) + cfg.noise * z(&mut rng));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut labels = alloc::vec![0usize; n];
    for &i in &order[..n_default] {
        labels[i] = 1;
    }
    let class_names = CLASS_NAMES.iter().map(|s| String::from(*s)).collect();
    LabeledDataset::with_class_names(features, labels, credit_schema(), class_names)
}

/// Column positions of the raw attributes the engineered variables read.
///
/// Outputs, in order: `debt_service_ratio` (annuity payment plus existing
/// debt over income), `loan_to_value`, `rate_x_ltv` (interest rate times
/// loan-to-value), `history_ratio`, `age`, `economy_level`. The first four are
/// invented stand-ins for undisclosed engineered variables. Denominators are
/// floored at small positive values so the map is defined on the whole
/// sampling box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreditEngineering {
    pub input_dim: usize,
    pub age: usize,
    pub economy_level: usize,
    pub monthly_income: usize,
    pub property_value: usize,
    pub loan_amount: usize,
    pub loan_term_months: usize,
    pub interest_rate: usize,
    pub existing_debt_payment: usize,
    pub credit_history_months: usize,
}

pub const ENGINEERED_NAMES: [&str; 6] = [
    "debt_service_ratio",
    "loan_to_value",
    "rate_x_ltv",
    "history_ratio",
    "age",
    "economy_level",
];

impl Default for CreditEngineering {
    fn default() -> Self {
        Self {
            input_dim: CREDIT_DIM,
            age: col::AGE,
            economy_level: col::ECONOMY_LEVEL,
            monthly_income: col::MONTHLY_INCOME,
            property_value: col::PROPERTY_VALUE,
            loan_amount: col::LOAN_AMOUNT,
            loan_term_months: col::LOAN_TERM_MONTHS,
            interest_rate: col::INTEREST_RATE,
            existing_debt_payment: col::EXISTING_DEBT_PAYMENT,
            credit_history_months: col::CREDIT_HISTORY_MONTHS,
        }
    }
}

impl CreditEngineering {
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        ENGINEERED_NAMES.len()
    }

    fn columns(&self) -> [usize; 9] {
        [
            self.age,
            self.economy_level,
            self.monthly_income,
            self.property_value,
            self.loan_amount,
            self.loan_term_months,
            self.interest_rate,
            self.existing_debt_payment,
            self.credit_history_months,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.columns().into_iter().find(|&c| c >= self.input_dim) {
            return Err(Error::InvalidConfig(alloc::format!(
                "credit engineering column {bad} out of range for dimension {}",
                self.input_dim
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let income = x[self.monthly_income].max(1.0);
        let property = x[self.property_value].max(1.0);
        let term = x[self.loan_term_months].max(1.0);
        let loan = x[self.loan_amount].max(0.0);
        let rate = x[self.interest_rate].max(0.0);
        let age = x[self.age];
        let payment = annuity_payment(loan, rate, term);
        let ltv = loan / property;
        alloc::vec![
            (payment + x[self.existing_debt_payment]) / income,
            ltv,
            rate * ltv,
            history_ratio(x[self.credit_history_months], age),
            age,
            x[self.economy_level],
        ]
    }

    /// Applies the map to every row.
    pub fn transform(&self, features: &Matrix) -> Result<Matrix> {
        if features.cols() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: features.cols(),
            });
        }
        let mut out = Matrix::zeros(features.rows(), self.output_dim());
        for (i, row) in features.iter_rows().enumerate() {
            out.row_mut(i).copy_from_slice(&self.apply(row));
        }
        Ok(out)
    }
}
