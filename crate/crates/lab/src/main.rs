use clap::Parser;
use clusterlab::cli::{run, Cli};
use clusterlab::LabError;

fn main() {
    let cli = Cli::parse();

    let jobs = cli
        .jobs
        .or_else(|| {
            std::env::var("CLUSTERLAB_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global();
    if jobs == 1 {
        faer::set_global_parallelism(faer::Par::Seq);
    }

    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let record = serde_json::json!({ "error": err.to_string() });
            eprintln!("{record}");
            let code = match &err {
                LabError::InvalidArgument(_)
                | LabError::Json(_)
                | LabError::Core(clusterlab_core::CoreError::InvalidSpec(_))
                | LabError::Core(clusterlab_core::CoreError::BadGateSites(_))
                | LabError::Core(clusterlab_core::CoreError::Unsupported(_))
                | LabError::Core(clusterlab_core::CoreError::SiteOutOfRange { .. }) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
