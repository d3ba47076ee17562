//! Human- and machine-readable renderings of evaluated plans.
//!
//! Text output rounds money and kilometres to one decimal and times to
//! whole minutes; the CSV renderings carry full precision. All output is
//! deterministic: same inputs, same bytes.

use crate::evaluator::{evaluate, RouteTimeline};
use crate::model::{CostBreakdown, Instance, RoutePlan, Violation};
use crate::solver::SolveReport;

/// Side-by-side cost comparison of two plans on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub text: String,
    pub csv: String,
}

/// Route drawing plus the per-stop schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteGeometry {
    /// None when the instance has no COORDS section.
    pub svg: Option<String>,
    pub stops_csv: String,
}

/// Renders both plans vehicle by vehicle with a totals row each and a
/// final delta row (B minus A).
pub fn render_comparison(
    instance: &Instance,
    plan_a: &RoutePlan,
    plan_b: &RoutePlan,
) -> Comparison {
    let a = evaluate(instance, plan_a);
    let b = evaluate(instance, plan_b);

    let mut text = String::new();
    text.push_str(&format!(
        "{:<8} {:>7} {:>6} {:>10} {:>9} {:>9} {:>9}  {}\n",
        "vehicle", "load_t", "load%", "transport", "penalty", "dur_min", "dist_km", "status"
    ));
    render_plan_block(&mut text, "plan A", &a);
    render_plan_block(&mut text, "plan B", &b);
    text.push_str("-- delta (B - A) --\n");
    text.push_str(&format!(
        "transport {:+.1}, penalty {:+.1}, total {:+.1}, distance {:+.1} km, duration {:+.0} min\n",
        b.total_transport - a.total_transport,
        b.total_penalty - a.total_penalty,
        b.total - a.total,
        total_distance(&b) - total_distance(&a),
        total_duration(&b) - total_duration(&a),
    ));

    let mut csv = String::from(
        "plan,vehicle,load_t,load_factor,transport_cost,penalty_cost,duration_min,distance_km,feasible\n",
    );
    csv_plan_block(&mut csv, "A", &a);
    csv_plan_block(&mut csv, "B", &b);
    csv.push_str(&format!(
        "delta,,,,{},{},{},{},\n",
        b.total_transport - a.total_transport,
        b.total_penalty - a.total_penalty,
        total_duration(&b) - total_duration(&a),
        total_distance(&b) - total_distance(&a),
    ));

    Comparison { text, csv }
}

fn render_plan_block(out: &mut String, label: &str, cost: &CostBreakdown) {
    out.push_str(&format!("-- {label} --\n"));
    for (i, v) in cost.per_vehicle.iter().enumerate() {
        out.push_str(&format!(
            "{:<8} {:>7.1} {:>5.0}% {:>10.1} {:>9.1} {:>9.0} {:>9.1}  {}\n",
            i + 1,
            v.load,
            v.load_factor * 100.0,
            v.transport_cost,
            v.penalty_cost,
            v.duration,
            v.distance,
            vehicle_status(&cost.violations, i + 1),
        ));
    }
    out.push_str(&format!(
        "{:<8} {:>7.1} {:>6} {:>10.1} {:>9.1} {:>9.0} {:>9.1}  {}\n",
        "total",
        cost.per_vehicle.iter().map(|v| v.load).sum::<f64>(),
        "",
        cost.total_transport,
        cost.total_penalty,
        total_duration(cost),
        total_distance(cost),
        if cost.feasible {
            "feasible"
        } else {
            "INFEASIBLE"
        },
    ));
}

fn csv_plan_block(out: &mut String, label: &str, cost: &CostBreakdown) {
    for (i, v) in cost.per_vehicle.iter().enumerate() {
        out.push_str(&format!(
            "{label},{},{},{},{},{},{},{},{}\n",
            i + 1,
            v.load,
            v.load_factor,
            v.transport_cost,
            v.penalty_cost,
            v.duration,
            v.distance,
            vehicle_feasible(&cost.violations, i + 1),
        ));
    }
    out.push_str(&format!(
        "{label},total,{},,{},{},{},{},{}\n",
        cost.per_vehicle.iter().map(|v| v.load).sum::<f64>(),
        cost.total_transport,
        cost.total_penalty,
        total_duration(cost),
        total_distance(cost),
        cost.feasible,
    ));
}

fn total_distance(cost: &CostBreakdown) -> f64 {
    cost.per_vehicle.iter().map(|v| v.distance).sum()
}

fn total_duration(cost: &CostBreakdown) -> f64 {
    cost.per_vehicle.iter().map(|v| v.duration).sum()
}

fn vehicle_feasible(violations: &[Violation], vehicle: usize) -> bool {
    !violations.iter().any(|v| match v {
        Violation::CapacityExceeded { vehicle: vv, .. }
        | Violation::RangeExceeded { vehicle: vv, .. }
        | Violation::UnknownStore { vehicle: vv, .. } => *vv == vehicle,
        _ => false,
    })
}

fn vehicle_status(violations: &[Violation], vehicle: usize) -> String {
    let mine: Vec<String> = violations
        .iter()
        .filter(|v| match v {
            Violation::CapacityExceeded { vehicle: vv, .. }
            | Violation::RangeExceeded { vehicle: vv, .. }
            | Violation::UnknownStore { vehicle: vv, .. } => *vv == vehicle,
            _ => false,
        })
        .map(|v| v.to_string())
        .collect();
    if mine.is_empty() {
        "ok".to_string()
    } else {
        format!("INFEASIBLE: {}", mine.join("; "))
    }
}

/// Full textual cost summary of one evaluated plan, violations included.
pub fn breakdown_text(instance: &Instance, plan: &RoutePlan, cost: &CostBreakdown) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:>12} {:>7} {:>6} {:>10} {:>9} {:>9} {:>9}  {}\n",
        "vehicle",
        "route",
        "load_t",
        "load%",
        "transport",
        "penalty",
        "dur_min",
        "dist_km",
        "status"
    ));
    for (i, v) in cost.per_vehicle.iter().enumerate() {
        let route: Vec<String> = plan.routes[i].iter().map(|id| id.to_string()).collect();
        out.push_str(&format!(
            "{:<8} {:>12} {:>7.1} {:>5.0}% {:>10.1} {:>9.1} {:>9.0} {:>9.1}  {}\n",
            i + 1,
            if route.is_empty() {
                "-".to_string()
            } else {
                route.join(" ")
            },
            v.load,
            v.load_factor * 100.0,
            v.transport_cost,
            v.penalty_cost,
            v.duration,
            v.distance,
            vehicle_status(&cost.violations, i + 1),
        ));
    }
    out.push_str(&format!(
        "total transport {:.1} + penalty {:.1} = {:.1} {}\n",
        cost.total_transport, cost.total_penalty, cost.total, instance.currency
    ));
    if cost.feasible {
        out.push_str("feasible: yes\n");
    } else {
        out.push_str("feasible: NO\n");
        for v in &cost.violations {
            out.push_str(&format!("  violation: {v}\n"));
        }
    }
    out
}

/// Machine-readable cost summary, full precision.
pub fn breakdown_csv(cost: &CostBreakdown) -> String {
    let mut out = String::from(
        "vehicle,load_t,load_factor,transport_cost,penalty_cost,duration_min,distance_km,feasible\n",
    );
    for (i, v) in cost.per_vehicle.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            i + 1,
            v.load,
            v.load_factor,
            v.transport_cost,
            v.penalty_cost,
            v.duration,
            v.distance,
            vehicle_feasible(&cost.violations, i + 1),
        ));
    }
    out.push_str(&format!(
        "total,{},,{},{},{},{},{}\n",
        cost.per_vehicle.iter().map(|v| v.load).sum::<f64>(),
        cost.total_transport,
        cost.total_penalty,
        total_duration(cost),
        total_distance(cost),
        cost.feasible,
    ));
    out
}

/// Convergence trace as CSV of (generation, best_cost).
pub fn trace_csv(report: &SolveReport) -> String {
    let mut out = String::from("generation,best_cost\n");
    for point in &report.trace {
        out.push_str(&format!("{},{}\n", point.generation, point.best_cost));
    }
    out
}

const ROUTE_COLORS: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Draws the plan over the instance coordinates and tabulates every stop.
///
/// The drawing needs a COORDS section; without one only the stop CSV is
/// produced. One polyline per non-empty route, one labelled circle per
/// store, one square for the depot.
pub fn export_route_geometry(
    instance: &Instance,
    plan: &RoutePlan,
    timelines: &[RouteTimeline],
) -> RouteGeometry {
    let mut stops_csv = String::from("vehicle,seq,store,arrival_min,early_by_min,late_by_min\n");
    for (v, timeline) in timelines.iter().enumerate() {
        for (seq, stop) in timeline.stops.iter().enumerate() {
            stops_csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                v + 1,
                seq + 1,
                stop.store_id,
                stop.arrival,
                stop.early_by,
                stop.late_by,
            ));
        }
    }

    let svg = instance
        .coords
        .as_ref()
        .map(|coords| draw_svg(instance, plan, coords));
    RouteGeometry { svg, stops_csv }
}

fn draw_svg(instance: &Instance, plan: &RoutePlan, coords: &[(f64, f64)]) -> String {
    let min_x = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let max_x = coords.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = coords.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let max_y = coords.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);

    let width = 800.0;
    let margin = 40.0;
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let scale = (width - 2.0 * margin) / span_x;
    let height = span_y * scale + 2.0 * margin;
    let place = |node: usize| -> (f64, f64) {
        let (x, y) = coords[node];
        ((x - min_x) * scale + margin, (max_y - y) * scale + margin)
    };

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.0} {height:.0}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    svg.push_str(&format!(
        "<title>{} - {} vehicles, {} stores</title>\n",
        instance.name,
        plan.routes.len(),
        instance.store_count()
    ));

    for (v, route) in plan.routes.iter().enumerate() {
        if route.is_empty() {
            continue;
        }
        let color = ROUTE_COLORS[v % ROUTE_COLORS.len()];
        let mut points = vec![place(0)];
        points.extend(route.iter().map(|&id| place(id)));
        points.push(place(0));
        let point_list: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.1},{y:.1}"))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            point_list.join(" ")
        ));
        let (lx, ly) = points[1];
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">vehicle {}</text>\n",
            lx + 10.0,
            ly - 10.0,
            v + 1
        ));
    }

    for store in &instance.stores {
        let (x, y) = place(store.id);
        svg.push_str(&format!(
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"6\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            x,
            y + 4.0,
            store.id
        ));
    }

    let (dx, dy) = place(0);
    svg.push_str(&format!(
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"14\" height=\"14\" fill=\"#333333\"/>\n",
        dx - 7.0,
        dy - 7.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" fill=\"#333333\">depot</text>\n",
        dx,
        dy - 12.0
    ));
    svg.push_str("</svg>\n");
    svg
}
