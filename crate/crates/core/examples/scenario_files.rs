//! Runs a scenario from config text through the library and prints the
//! files it writes.

use ptmetric::scenario::{parse_config, run};

const CONFIG: &str = "
# long-time survival over initial states, broken phase
scenario = sp-surface
eta = sqrt(2)
s = 1
phi_count = 5
p_count = 3
";

fn main() {
    let dir = std::env::temp_dir().join("ptmetric-example");
    let cfg = match parse_config(CONFIG) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config: {e}");
            std::process::exit(1);
        }
    };
    match run(&cfg, &dir) {
        Ok(report) => {
            for path in [report.data, report.manifest] {
                println!("== {}", path.display());
                print!("{}", std::fs::read_to_string(&path).expect("written file is readable"));
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
