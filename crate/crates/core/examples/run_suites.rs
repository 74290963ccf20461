//! Running the law suites from code.

use effectus::harness::{run_all, Instance, Status, SuiteConfig};

fn main() -> effectus::Result<()> {
    for inst in Instance::ALL {
        let cfg = SuiteConfig::new(inst).seed(42).trials(100);
        let reports = run_all(None, &cfg)?;
        let failed: Vec<&str> = reports
            .iter()
            .filter(|r| r.status == Status::Fail)
            .map(|r| r.suite.as_str())
            .collect();
        let cases: usize = reports.iter().map(|r| r.trials).sum();
        println!("{inst:<8} {} suites, {cases} cases, failing: {failed:?}", reports.len());
    }
    let only = ["bayes".to_string(), "galois".to_string()];
    for r in run_all(Some(&only), &SuiteConfig::new(Instance::Boolean))? {
        println!("{} on boolean: {:?} over {} enumerated cases", r.suite, r.status, r.trials);
    }
    Ok(())
}
