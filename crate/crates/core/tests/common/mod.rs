use num_bigint::BigInt;
use psghost::elim::StepState;

pub fn fixture(step: usize) -> String {
    let path = format!("{}/tests/fixtures/p7_step{step}.csv", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

// "12", "2^3", "2^2*3"; None for the wildcard "*".
fn cell(s: &str) -> Option<BigInt> {
    if s == "*" {
        return None;
    }
    let mut acc = BigInt::from(1);
    for factor in s.split('*') {
        let v = match factor.split_once('^') {
            Some((b, e)) => num_traits::pow(b.parse::<BigInt>().ok()?, e.parse().ok()?),
            None => factor.parse::<BigInt>().ok()?,
        };
        acc *= v;
    }
    Some(acc)
}

/// Compares a state with a fixture; returns the number of non-wildcard
/// cells compared, or a description of the first difference.
pub fn compare(state: &StepState, text: &str) -> Result<usize, String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty fixture")?.split(',').skip(1).collect();
    let cols: Vec<String> = state.cols.iter().map(ToString::to_string).collect();
    if header != cols {
        return Err(format!("step {}: columns {header:?} vs {cols:?}", state.n));
    }
    let mut compared = 0;
    let mut rows = 0;
    for (r, line) in lines.enumerate() {
        let (label, rest) = line
            .strip_prefix('"')
            .and_then(|l| l.split_once("\","))
            .ok_or_else(|| format!("bad fixture line {line}"))?;
        let want = state.rows.get(r).map(ToString::to_string).unwrap_or_default();
        if label != want {
            return Err(format!("step {}: row {label} vs {want}", state.n));
        }
        for (k, s) in rest.split(',').enumerate() {
            if let Some(v) = cell(s) {
                if state.values.get(r, k) != &v {
                    return Err(format!(
                        "step {} row {} column {}: {} vs printed {v}",
                        state.n,
                        state.rows[r],
                        state.cols[k],
                        state.values.get(r, k)
                    ));
                }
                compared += 1;
            }
        }
        rows += 1;
    }
    if rows != state.rows.len() {
        return Err(format!("step {}: {rows} rows vs {}", state.n, state.rows.len()));
    }
    Ok(compared)
}
