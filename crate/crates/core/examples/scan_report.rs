//! A parallel grid scan written as JSON lines and CSV, then read back.

use hcl::congruences::TheoremId;
use hcl::report::{emit, parse, Format, Status};
use hcl::scan::{scan, ScanJob};
use hcl::Context;

fn main() -> hcl::Result<()> {
    let ctx = Context::new();
    let job = ScanJob::new(TheoremId::ThmEe20, 3..=23).param("n", 1..=6);
    let records = scan(&job, &ctx)?;

    let csv = emit(&records, Format::Csv);
    print!("{}", String::from_utf8_lossy(&csv));

    let json = emit(&records, Format::Json);
    assert_eq!(parse(&json, Format::Json)?, records);
    assert_eq!(parse(&csv, Format::Csv)?, records);

    let count = |s| records.iter().filter(|r| r.status == s).count();
    eprintln!(
        "{} records: {} pass, {} fail, {} skipped",
        records.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::SkippedHypothesis)
    );
    Ok(())
}
