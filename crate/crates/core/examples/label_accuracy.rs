// A file-based workflow: write two datasets and their category labels, match
// them from disk and score the matching at the label level.
//
//     cargo run --example label_accuracy

use matchkit::io::{read_labels_csv, read_matrix_csv, write_labels_csv, write_matrix_csv};
use matchkit::{label_confusion, laps_match, make_signal_sweep_params, sample_pair, BasisSource, SeededRng};

pub fn run_example() -> matchkit::Result<f64> {
    let dir = tempfile::tempdir().map_err(|source| matchkit::Error::Io { path: "tempdir".into(), source })?;
    let mut rng = SeededRng::new(8);
    let params = make_signal_sweep_params(&mut rng, 240, 60, 4, 400.0, 1.0, 1.3)?;
    let data = sample_pair(&mut rng, &params)?;

    // three cell types assigned by row blocks of X; Y inherits them through Π*
    let types = ["T cell", "B cell", "NK"];
    let labels_x: Vec<&str> = (0..240).map(|i| types[i * 3 / 240]).collect();
    let mut labels_y = vec![""; 240];
    for (i, &label) in labels_x.iter().enumerate() {
        labels_y[params.pi_star.get(i)] = label;
    }

    write_matrix_csv(&data.x, dir.path().join("x.csv"))?;
    write_matrix_csv(&data.y, dir.path().join("y.csv"))?;
    write_labels_csv(&labels_x, dir.path().join("labels_x.txt"))?;
    write_labels_csv(&labels_y, dir.path().join("labels_y.txt"))?;

    let x = read_matrix_csv(dir.path().join("x.csv"))?;
    let y = read_matrix_csv(dir.path().join("y.csv"))?;
    let lx = read_labels_csv(dir.path().join("labels_x.txt"))?;
    let ly = read_labels_csv(dir.path().join("labels_y.txt"))?;

    let out = laps_match(&x, &y, 4, BasisSource::FromX)?;
    let confusion = label_confusion(&out.permutation, &lx, &ly)?;
    println!("label accuracy {:.4}", confusion.accuracy);
    print!("{}", confusion.to_csv(true));
    Ok(confusion.accuracy)
}

#[allow(dead_code)]
fn main() -> matchkit::Result<()> {
    run_example().map(|_| ())
}
