//! Grid parsing for scan/bench: comma-separated values or log-spaced
//! `logspace:min:max:count` triples.

pub fn parse_values(spec: &str) -> Result<Vec<f64>, String> {
    if let Some(rest) = spec.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "logspace spec needs min:max:count, got '{rest}'"
            ));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad logspace min '{}'", parts[0]))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad logspace max '{}'", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad logspace count '{}'", parts[2]))?;
        if !(min > 0.0) || !(max > min) || count < 2 {
            return Err("logspace needs 0 < min < max and count >= 2".into());
        }
        let (lmin, lmax) = (min.ln(), max.ln());
        return Ok((0..count)
            .map(|i| (lmin + (lmax - lmin) * i as f64 / (count - 1) as f64).exp())
            .collect());
    }
    let vals: Result<Vec<f64>, _> = spec.split(',').map(|tok| tok.trim().parse()).collect();
    let vals = vals.map_err(|_| format!("could not parse value list '{spec}'"))?;
    if vals.is_empty() {
        return Err("empty value list".into());
    }
    Ok(vals)
}
