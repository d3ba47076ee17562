//! Line-oriented text formats for instances and plans.
//!
//! An instance file holds the sections META, FLEET, COEFFS, STORES, MATRIX
//! and optionally COORDS, in any order, with `#` comment lines anywhere.
//! The MATRIX section accepts either the full symmetric matrix or its lower
//! triangle (including the zero diagonal); both parse to the same instance.
//! [`emit_instance`] writes the normalized form: fixed section order, full
//! matrix, HH:MM clock times, numbers with the fewest digits that still
//! round-trip. `parse(emit(x)) == x` holds for every valid instance.
//!
//! A plan file has one line per vehicle: the 1-based vehicle index followed
//! by the store ids it visits, in order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    format_clock, validate_instance, CostCoefficients, Fleet, Instance, RoutePlan, Store,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("line {line}: duplicate section {name}")]
    DuplicateSection { line: usize, name: String },
    #[error("instance failed validation:\n{}", .0.join("\n"))]
    InvalidInstance(Vec<String>),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

const SECTIONS: [&str; 6] = ["META", "FLEET", "COEFFS", "STORES", "MATRIX", "COORDS"];

/// Parses and validates an instance file. Any broken invariant is a hard
/// failure: the returned instance is always safe for every downstream
/// operation.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut sections: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
    let mut current: Option<&str> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(&name) = SECTIONS.iter().find(|&&s| s == line) {
            if sections.contains_key(name) {
                return Err(ParseError::DuplicateSection {
                    line: line_no,
                    name: name.to_string(),
                });
            }
            sections.insert(name, Vec::new());
            current = Some(name);
            continue;
        }
        match current {
            Some(name) => sections.get_mut(name).unwrap().push((line_no, line)),
            None => return Err(syntax(line_no, "content before the first section header")),
        }
    }

    let meta = sections
        .get("META")
        .ok_or(ParseError::MissingSection("META"))?;
    let (name, currency, depot_open) = parse_meta(meta)?;
    let fleet = parse_fleet(
        sections
            .get("FLEET")
            .ok_or(ParseError::MissingSection("FLEET"))?,
    )?;
    let coeffs = parse_coeffs(
        sections
            .get("COEFFS")
            .ok_or(ParseError::MissingSection("COEFFS"))?,
    )?;
    let stores = parse_stores(
        sections
            .get("STORES")
            .ok_or(ParseError::MissingSection("STORES"))?,
    )?;
    let n = stores.len();
    let distances = parse_matrix(
        sections
            .get("MATRIX")
            .ok_or(ParseError::MissingSection("MATRIX"))?,
        n,
    )?;
    let coords = match sections.get("COORDS") {
        Some(lines) => Some(parse_coords(lines, n)?),
        None => None,
    };

    let instance = Instance {
        name,
        currency,
        stores,
        fleet,
        coeffs,
        distances,
        depot_open,
        coords,
    };
    let problems = validate_instance(&instance);
    if !problems.is_empty() {
        return Err(ParseError::InvalidInstance(problems));
    }
    Ok(instance)
}

fn parse_meta(lines: &[(usize, &str)]) -> Result<(String, String, u32), ParseError> {
    let mut name = None;
    let mut currency = None;
    let mut depot_open = None;
    for &(line_no, line) in lines {
        let (key, rest) = split_key(line_no, line)?;
        match key {
            "name" => name = Some(rest.to_string()),
            "currency" => currency = Some(rest.to_string()),
            "depot_open" => depot_open = Some(parse_clock(line_no, rest)?),
            other => return Err(syntax(line_no, format!("unknown META key '{other}'"))),
        }
    }
    Ok((
        name.ok_or(syntax(0, "META is missing 'name'"))?,
        currency.ok_or(syntax(0, "META is missing 'currency'"))?,
        depot_open.ok_or(syntax(0, "META is missing 'depot_open'"))?,
    ))
}

fn parse_fleet(lines: &[(usize, &str)]) -> Result<Fleet, ParseError> {
    let mut vehicles = None;
    let mut capacity = None;
    let mut max_route_distance = None;
    let mut speed = None;
    for &(line_no, line) in lines {
        let (key, rest) = split_key(line_no, line)?;
        match key {
            "vehicles" => vehicles = Some(parse_num::<usize>(line_no, rest, "vehicle count")?),
            "capacity" => capacity = Some(parse_num::<f64>(line_no, rest, "capacity")?),
            "max_route_distance" => {
                max_route_distance = Some(parse_num::<f64>(line_no, rest, "max route distance")?)
            }
            "speed" => speed = Some(parse_num::<f64>(line_no, rest, "speed")?),
            other => return Err(syntax(line_no, format!("unknown FLEET key '{other}'"))),
        }
    }
    Ok(Fleet {
        vehicle_count: vehicles.ok_or(syntax(0, "FLEET is missing 'vehicles'"))?,
        capacity: capacity.ok_or(syntax(0, "FLEET is missing 'capacity'"))?,
        max_route_distance: max_route_distance
            .ok_or(syntax(0, "FLEET is missing 'max_route_distance'"))?,
        speed: speed.ok_or(syntax(0, "FLEET is missing 'speed'"))?,
    })
}

fn parse_coeffs(lines: &[(usize, &str)]) -> Result<CostCoefficients, ParseError> {
    let mut per_km = None;
    let mut early = None;
    let mut late = None;
    let mut weight = None;
    for &(line_no, line) in lines {
        let (key, rest) = split_key(line_no, line)?;
        let value = parse_num::<f64>(line_no, rest, key)?;
        match key {
            "per_km" => per_km = Some(value),
            "early_penalty" => early = Some(value),
            "late_penalty" => late = Some(value),
            "infeasibility_weight" => weight = Some(value),
            other => return Err(syntax(line_no, format!("unknown COEFFS key '{other}'"))),
        }
    }
    Ok(CostCoefficients {
        per_km: per_km.ok_or(syntax(0, "COEFFS is missing 'per_km'"))?,
        early_penalty: early.ok_or(syntax(0, "COEFFS is missing 'early_penalty'"))?,
        late_penalty: late.ok_or(syntax(0, "COEFFS is missing 'late_penalty'"))?,
        infeasibility_weight: weight
            .ok_or(syntax(0, "COEFFS is missing 'infeasibility_weight'"))?,
    })
}

fn parse_stores(lines: &[(usize, &str)]) -> Result<Vec<Store>, ParseError> {
    let mut stores = Vec::with_capacity(lines.len());
    for &(line_no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 5 && tokens.len() != 7 {
            return Err(syntax(
                line_no,
                format!(
                    "store line needs 'id demand handling from to [expected_from expected_to]', got {} fields",
                    tokens.len()
                ),
            ));
        }
        let (expected_earliest, expected_latest) = if tokens.len() == 7 {
            match (tokens[5], tokens[6]) {
                ("-", "-") => (None, None),
                (e, l) => (
                    Some(parse_clock(line_no, e)?),
                    Some(parse_clock(line_no, l)?),
                ),
            }
        } else {
            (None, None)
        };
        stores.push(Store {
            id: parse_num::<usize>(line_no, tokens[0], "store id")?,
            demand: parse_num::<f64>(line_no, tokens[1], "demand")?,
            handling_time: parse_num::<u32>(line_no, tokens[2], "handling time")?,
            accept_earliest: parse_clock(line_no, tokens[3])?,
            accept_latest: parse_clock(line_no, tokens[4])?,
            expected_earliest,
            expected_latest,
        });
    }
    Ok(stores)
}

fn parse_matrix(lines: &[(usize, &str)], n: usize) -> Result<Vec<Vec<f64>>, ParseError> {
    if lines.len() != n + 1 {
        let line = lines.last().map(|&(l, _)| l).unwrap_or(0);
        return Err(syntax(
            line,
            format!(
                "MATRIX has {} rows, expected {} (depot plus {} stores)",
                lines.len(),
                n + 1,
                n
            ),
        ));
    }
    let mut matrix = vec![vec![0.0; n + 1]; n + 1];
    for (row, &(line_no, line)) in lines.iter().enumerate() {
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| parse_num::<f64>(line_no, tok, "distance"))
            .collect::<Result<_, _>>()?;
        if values.len() == row + 1 {
            // Lower-triangular row: mirror into the upper half.
            for (col, &v) in values.iter().enumerate() {
                matrix[row][col] = v;
                matrix[col][row] = v;
            }
        } else if values.len() == n + 1 {
            matrix[row] = values;
        } else {
            return Err(syntax(
                line_no,
                format!(
                    "matrix row {} has {} values, expected {} (full) or {} (lower triangle)",
                    row,
                    values.len(),
                    n + 1,
                    row + 1
                ),
            ));
        }
    }
    Ok(matrix)
}

fn parse_coords(lines: &[(usize, &str)], n: usize) -> Result<Vec<(f64, f64)>, ParseError> {
    if lines.len() != n + 1 {
        let line = lines.last().map(|&(l, _)| l).unwrap_or(0);
        return Err(syntax(
            line,
            format!("COORDS has {} points, expected {}", lines.len(), n + 1),
        ));
    }
    lines
        .iter()
        .map(|&(line_no, line)| {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(syntax(line_no, "coordinate line needs 'x y'"));
            }
            Ok((
                parse_num::<f64>(line_no, tokens[0], "x coordinate")?,
                parse_num::<f64>(line_no, tokens[1], "y coordinate")?,
            ))
        })
        .collect()
}

fn split_key(line_no: usize, line: &str) -> Result<(&str, &str), ParseError> {
    match line.split_once(char::is_whitespace) {
        Some((key, rest)) => Ok((key, rest.trim())),
        None => Err(syntax(
            line_no,
            format!("expected 'key value', got '{line}'"),
        )),
    }
}

fn parse_num<T: std::str::FromStr>(
    line_no: usize,
    token: &str,
    what: &str,
) -> Result<T, ParseError> {
    token
        .parse::<T>()
        .map_err(|_| syntax(line_no, format!("cannot read {what} from '{token}'")))
}

/// Parses HH:MM (24-hour) into minutes since midnight.
fn parse_clock(line_no: usize, token: &str) -> Result<u32, ParseError> {
    let bad = || syntax(line_no, format!("expected a HH:MM time, got '{token}'"));
    let (h, m) = token.split_once(':').ok_or_else(bad)?;
    let hours: u32 = h.parse().map_err(|_| bad())?;
    let minutes: u32 = m.parse().map_err(|_| bad())?;
    if hours > 23 || minutes > 59 {
        return Err(bad());
    }
    Ok(hours * 60 + minutes)
}

/// Writes the canonical normalized form of an instance.
pub fn emit_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str("META\n");
    out.push_str(&format!("name {}\n", instance.name));
    out.push_str(&format!("currency {}\n", instance.currency));
    out.push_str(&format!(
        "depot_open {}\n",
        format_clock(instance.depot_open)
    ));

    out.push_str("\nFLEET\n");
    out.push_str(&format!("vehicles {}\n", instance.fleet.vehicle_count));
    out.push_str(&format!("capacity {}\n", instance.fleet.capacity));
    out.push_str(&format!(
        "max_route_distance {}\n",
        instance.fleet.max_route_distance
    ));
    out.push_str(&format!("speed {}\n", instance.fleet.speed));

    out.push_str("\nCOEFFS\n");
    out.push_str(&format!("per_km {}\n", instance.coeffs.per_km));
    out.push_str(&format!(
        "early_penalty {}\n",
        instance.coeffs.early_penalty
    ));
    out.push_str(&format!("late_penalty {}\n", instance.coeffs.late_penalty));
    out.push_str(&format!(
        "infeasibility_weight {}\n",
        instance.coeffs.infeasibility_weight
    ));

    out.push_str("\nSTORES\n");
    for s in &instance.stores {
        let expected = match (s.expected_earliest, s.expected_latest) {
            (Some(e), Some(l)) => format!("{} {}", format_clock(e), format_clock(l)),
            _ => "- -".to_string(),
        };
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            s.id,
            s.demand,
            s.handling_time,
            format_clock(s.accept_earliest),
            format_clock(s.accept_latest),
            expected
        ));
    }

    out.push_str("\nMATRIX\n");
    for row in &instance.distances {
        let cells: Vec<String> = row.iter().map(|d| format!("{d}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }

    if let Some(coords) = &instance.coords {
        out.push_str("\nCOORDS\n");
        for (x, y) in coords {
            out.push_str(&format!("{x} {y}\n"));
        }
    }
    out
}

/// Parses a plan file against its instance. Unlisted vehicles get empty
/// routes; unknown stores and bad vehicle indices are hard errors.
pub fn parse_plan(text: &str, instance: &Instance) -> Result<RoutePlan, ParseError> {
    let k = instance.fleet.vehicle_count;
    let n = instance.store_count();
    let mut routes: Vec<Option<Vec<usize>>> = vec![None; k];

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let vehicle: usize = parse_num(line_no, tokens.next().unwrap(), "vehicle index")?;
        if vehicle == 0 || vehicle > k {
            return Err(syntax(
                line_no,
                format!("vehicle index {vehicle} out of range 1..={k}"),
            ));
        }
        if routes[vehicle - 1].is_some() {
            return Err(syntax(line_no, format!("vehicle {vehicle} listed twice")));
        }
        let mut route = Vec::new();
        for token in tokens {
            let store: usize = parse_num(line_no, token, "store id")?;
            if store == 0 || store > n {
                return Err(syntax(
                    line_no,
                    format!("unknown store {store}; instance has stores 1..={n}"),
                ));
            }
            route.push(store);
        }
        routes[vehicle - 1] = Some(route);
    }

    Ok(RoutePlan::new(
        routes.into_iter().map(|r| r.unwrap_or_default()).collect(),
    ))
}

/// Writes a plan file, one line per vehicle.
pub fn emit_plan(plan: &RoutePlan) -> String {
    let mut out = String::new();
    for (v, route) in plan.routes.iter().enumerate() {
        out.push_str(&(v + 1).to_string());
        for id in route {
            out.push(' ');
            out.push_str(&id.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# three stores on a line
META
name line demo
currency CNY
depot_open 06:00

FLEET
vehicles 2
capacity 2
max_route_distance 150
speed 60

COEFFS
per_km 1.8
early_penalty 0.5
late_penalty 1
infeasibility_weight 50000

STORES
1 0.3 18 06:00 10:30 07:30 09:00
2 0.5 30 07:00 13:30 - -
3 0.2 12 06:30 12:30 08:00 10:30

MATRIX
0
4 0
7 3 0
8 5 2 0
";

    #[test]
    fn parses_triangular_matrix_and_mirrors_it() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.store_count(), 3);
        assert_eq!(inst.distance(0, 2), 7.0);
        assert_eq!(inst.distance(2, 0), 7.0);
        assert_eq!(inst.distance(3, 1), 5.0);
        assert_eq!(inst.depot_open, 360);
        assert_eq!(inst.stores[0].expected_earliest, Some(450));
        assert_eq!(inst.stores[1].expected_earliest, None);
    }

    #[test]
    fn full_and_triangular_forms_parse_identically() {
        let inst = parse_instance(SAMPLE).unwrap();
        let full = emit_instance(&inst);
        assert_eq!(parse_instance(&full).unwrap(), inst);
    }

    #[test]
    fn emit_then_parse_round_trips() {
        let inst = parse_instance(SAMPLE).unwrap();
        let text = emit_instance(&inst);
        let again = parse_instance(&text).unwrap();
        assert_eq!(again, inst);
        assert_eq!(emit_instance(&again), text);
    }

    #[test]
    fn malformed_store_line_reports_its_number() {
        let broken = SAMPLE.replace("2 0.5 30 07:00 13:30 - -", "2 0.5 thirty 07:00 13:30 - -");
        match parse_instance(&broken) {
            Err(ParseError::Syntax { line, message }) => {
                assert_eq!(line, 21);
                assert!(message.contains("handling time"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn inverted_window_is_surfaced_from_the_validator() {
        let broken = SAMPLE.replace("1 0.3 18 06:00 10:30", "1 0.3 18 11:00 10:30");
        match parse_instance(&broken) {
            Err(ParseError::InvalidInstance(problems)) => {
                assert!(
                    problems.iter().any(|p| p.contains("window")),
                    "{problems:?}"
                );
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn bad_clock_is_rejected() {
        let broken = SAMPLE.replace("depot_open 06:00", "depot_open 25:00");
        assert!(matches!(
            parse_instance(&broken),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn missing_section_is_reported() {
        let broken = SAMPLE.replace("COEFFS", "# COEFFS gone");
        // The coefficient lines now dangle under FLEET and are unknown keys.
        assert!(parse_instance(&broken).is_err());
    }

    #[test]
    fn plan_round_trip_and_defaults() {
        let inst = parse_instance(SAMPLE).unwrap();
        let plan = parse_plan("2 3 1\n", &inst).unwrap();
        assert_eq!(plan.routes, vec![vec![], vec![3, 1]]);
        let text = emit_plan(&plan);
        assert_eq!(text, "1\n2 3 1\n");
        assert_eq!(parse_plan(&text, &inst).unwrap(), plan);
    }

    #[test]
    fn plan_with_unknown_store_is_rejected() {
        let inst = parse_instance(SAMPLE).unwrap();
        match parse_plan("1 4\n", &inst) {
            Err(ParseError::Syntax { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("unknown store"), "{message}");
            }
            other => panic!("expected unknown-store error, got {other:?}"),
        }
    }

    #[test]
    fn plan_with_bad_vehicle_is_rejected() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert!(parse_plan("3 1\n", &inst).is_err());
        assert!(parse_plan("1 1\n1 2\n", &inst).is_err());
    }
}
