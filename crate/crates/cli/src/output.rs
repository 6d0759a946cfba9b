//! CSV emission. Floats carry 17 significant digits so values round-trip.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use secsched::secrecy::{OutageValidationRow, RateCost};
use secsched::simulator::{RunMetrics, SlotTraceRecord};

use crate::error::CliError;

pub type CsvSink = csv::Writer<Box<dyn Write>>;

pub fn open(path: Option<&Path>) -> Result<CsvSink, CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn rate_cost(r: RateCost<f64>) -> String {
    match r {
        RateCost::Finite(x) => float(x),
        RateCost::Unbounded => "inf".to_string(),
    }
}

pub fn summary_header(n_users: usize) -> Vec<String> {
    let mut h: Vec<String> = ["n_slots", "admission_rate_weighted", "avg_admission_rate"].map(String::from).to_vec();
    h.extend((0..n_users).map(|i| format!("admission_rate_{i}")));
    h.extend((0..n_users).map(|i| format!("queue_length_{i}")));
    h.extend(
        [
            "queue_length_mean",
            "avg_power",
            "final_virtual_queue",
            "transmit_slots",
            "outage_count",
            "empirical_outage",
            "max_queue",
            "max_virtual_queue",
        ]
        .map(String::from),
    );
    h.extend((0..n_users).map(|i| format!("slots_served_{i}")));
    h.extend(
        ["rs_max", "gamma", "bound_b", "bound_c", "bound_u_max", "bound_x_max", "optimality_gap", "x_max_exceeded"]
            .map(String::from),
    );
    h
}

pub fn summary_row(m: &RunMetrics<f64>) -> Vec<String> {
    let mut r = vec![m.n_slots.to_string(), float(m.weighted_admission_rate), float(m.avg_admission_rate)];
    r.extend(m.admission_rate.iter().map(|&x| float(x)));
    r.extend(m.avg_queue_length.iter().map(|&x| float(x)));
    r.extend([
        float(m.mean_queue_length),
        float(m.avg_power),
        float(m.final_queues.power_virtual),
        m.transmit_slots.to_string(),
        m.outage_slots.to_string(),
        float(m.empirical_outage),
        float(m.max_queue),
        float(m.max_virtual_queue),
    ]);
    r.extend(m.slots_served.iter().map(|s| s.to_string()));
    let b = &m.bounds;
    let u_max = b.u_max.iter().copied().fold(0.0, f64::max);
    r.extend([
        float(m.rs_max),
        float(m.gamma),
        float(b.b),
        float(b.c),
        float(u_max),
        float(b.x_max),
        float(b.optimality_gap),
        (m.x_max_exceeded as u8).to_string(),
    ]);
    r
}

pub fn trace_header(n_users: usize) -> Vec<String> {
    let mut h = vec!["slot".to_string()];
    h.extend((0..n_users).map(|i| format!("arrivals_{i}")));
    h.extend((0..n_users).map(|i| format!("admitted_{i}")));
    h.extend(
        ["served_user", "power", "data_fraction", "r_b", "r_e", "r_s", "eavesdropper_capacity", "outage"]
            .map(String::from),
    );
    h.extend((0..n_users).map(|i| format!("queue_{i}")));
    h.push("virtual_queue".to_string());
    h
}

/// Idle slots leave `served_user` and `outage` empty.
pub fn trace_row(r: &SlotTraceRecord<f64>) -> Vec<String> {
    let mut row = vec![r.slot.to_string()];
    row.extend(r.arrivals.iter().map(|&x| float(x)));
    row.extend(r.admissions.iter().map(|&x| float(x)));
    row.extend([
        r.served_user.map(|u| u.to_string()).unwrap_or_default(),
        float(r.power),
        float(r.data_fraction),
        float(r.r_b),
        rate_cost(r.r_e),
        float(r.r_s),
        float(r.eavesdropper_capacity),
        r.outage.map(|o| (o as u8).to_string()).unwrap_or_default(),
    ]);
    row.extend(r.queues.iter().map(|&x| float(x)));
    row.push(float(r.power_virtual));
    row
}

pub const VALIDATION_HEADER: [&str; 8] =
    ["epsilon", "r_e", "target_eta", "estimated_eta", "std_error", "n_samples", "outages", "pass"];

pub fn validation_row(r: &OutageValidationRow<f64>) -> Vec<String> {
    vec![
        float(r.epsilon),
        rate_cost(r.r_e),
        float(r.target_eta),
        float(r.estimated_eta),
        float(r.std_error),
        r.n_samples.to_string(),
        r.outages.to_string(),
        if r.pass { "PASS" } else { "FAIL" }.to_string(),
    ]
}
