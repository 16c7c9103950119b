//! Reference datasets used by the tests, benches and examples.

use crate::models::{Dataset, DmuRecord};
use crate::ranking::IntervalDataset;

/// Twelve hospitals: inputs (doctors, nurses), outputs (outpatients, inpatients).
pub fn hospitals() -> Dataset {
    let rows: [(&str, [f64; 4]); 12] = [
        ("A", [20.0, 151.0, 100.0, 90.0]),
        ("B", [19.0, 131.0, 150.0, 50.0]),
        ("C", [25.0, 160.0, 160.0, 55.0]),
        ("D", [27.0, 168.0, 180.0, 72.0]),
        ("E", [22.0, 158.0, 94.0, 66.0]),
        ("F", [55.0, 255.0, 230.0, 90.0]),
        ("G", [33.0, 235.0, 220.0, 88.0]),
        ("H", [31.0, 206.0, 152.0, 80.0]),
        ("I", [30.0, 244.0, 190.0, 100.0]),
        ("J", [50.0, 268.0, 250.0, 100.0]),
        ("K", [53.0, 306.0, 260.0, 147.0]),
        ("L", [38.0, 284.0, 250.0, 120.0]),
    ];
    Dataset::new(
        rows.iter()
            .map(|(id, r)| DmuRecord::new(*id, vec![r[0], r[1]], vec![r[2], r[3]]))
            .collect(),
    )
    .expect("hospital data is valid")
}

/// Three DMUs with unit input and outputs (2,4), (3,3), (4,2); the middle
/// one sits exactly on the segment joining the others.
pub fn unit_input_triple() -> Dataset {
    Dataset::new(vec![
        DmuRecord::new("A", vec![1.0], vec![2.0, 4.0]),
        DmuRecord::new("B", vec![1.0], vec![3.0, 3.0]),
        DmuRecord::new("C", vec![1.0], vec![4.0, 2.0]),
    ])
    .expect("valid")
}

/// Eight DMUs with one input and one output.
pub fn single_input_output() -> Dataset {
    let rows = [
        ("A", 2.0, 1.0),
        ("B", 3.0, 3.0),
        ("C", 2.0, 2.0),
        ("D", 4.0, 3.0),
        ("E", 6.0, 5.0),
        ("F", 5.0, 2.0),
        ("G", 6.0, 3.0),
        ("H", 8.0, 5.0),
    ];
    Dataset::new(
        rows.iter()
            .map(|(id, x, y)| DmuRecord::new(*id, vec![*x], vec![*y]))
            .collect(),
    )
    .expect("valid")
}

/// Ten DMUs with unit input and two interval-valued outputs.
pub fn interval_outputs() -> IntervalDataset {
    let rows: [(&str, [f64; 4]); 10] = [
        ("A", [0.8, 1.2, 7.50, 8.50]),
        ("B", [1.8, 2.2, 2.50, 3.50]),
        ("C", [1.6, 2.4, 5.75, 6.25]),
        ("D", [2.5, 3.5, 2.75, 3.25]),
        ("E", [2.8, 3.2, 6.75, 7.25]),
        ("F", [3.8, 4.2, 1.83, 2.17]),
        ("G", [3.4, 4.6, 4.50, 5.50]),
        ("H", [4.7, 5.3, 1.50, 2.50]),
        ("I", [5.6, 6.4, 1.67, 2.33]),
        ("J", [6.7, 7.3, 0.75, 1.25]),
    ];
    let lower = rows
        .iter()
        .map(|(id, r)| DmuRecord::new(*id, vec![1.0], vec![r[0], r[2]]))
        .collect();
    let upper = rows
        .iter()
        .map(|(id, r)| DmuRecord::new(*id, vec![1.0], vec![r[1], r[3]]))
        .collect();
    IntervalDataset::new(
        Dataset::new(lower).expect("valid"),
        Dataset::new(upper).expect("valid"),
    )
    .expect("valid")
}
