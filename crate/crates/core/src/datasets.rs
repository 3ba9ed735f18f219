//! Named datasets: the embedded karate club fixture, the synthetic
//! small-world graph, and real-world edge lists looked up in a local data
//! directory.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph_io::{
    generate_small_world, load_edge_list, Cleanup, GraphStats, SmallWorldConfig,
};

/// Directory searched for downloaded dataset files.
pub const DATA_DIR_ENV: &str = "POOLTEST_DATA_DIR";

const KARATE: &str = include_str!("../data/karate.txt");

/// Zachary karate club members who sided with the instructor (1-based).
pub const KARATE_INSTRUCTOR_FACTION: [usize; 17] =
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 17, 18, 20, 22];

pub fn karate() -> Graph {
    load_edge_list(KARATE.as_bytes(), Cleanup::None).expect("embedded fixture parses")
}

/// Reported statistics of a dataset after preprocessing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceStats {
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub avg_excess_degree: f64,
    pub avg_clustering_coefficient: f64,
    pub avg_path_length: f64,
    pub diameter: usize,
    pub density: f64,
}

impl ReferenceStats {
    /// Integer fields exact, degree metrics within `tol`.
    pub fn matches(&self, s: &GraphStats, tol: f64) -> bool {
        self.n == s.n
            && self.m == s.m
            && self.diameter == s.diameter
            && (self.avg_degree - s.avg_degree).abs() <= tol
            && (self.avg_excess_degree - s.avg_excess_degree).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetInfo {
    pub name: &'static str,
    pub file_name: &'static str,
    pub url: &'static str,
    pub cleanup: Cleanup,
    pub reference: ReferenceStats,
    /// Average prevalence (fraction) for 1..=5 seeds at phi = 0.1, D = 2.
    pub reference_prevalence: [f64; 5],
    pub note: &'static str,
}

pub const SMALL_WORLD_REFERENCE: ReferenceStats = ReferenceStats {
    n: 1000,
    m: 15_000,
    avg_degree: 30.0,
    avg_excess_degree: 29.3581,
    avg_clustering_coefficient: 0.1133,
    avg_path_length: 2.4414,
    diameter: 3,
    density: 3.0030e-2,
};

pub const SMALL_WORLD_PREVALENCE: [f64; 5] = [0.0126, 0.0251, 0.0375, 0.0495, 0.0613];

pub const MANIFEST: [DatasetInfo; 3] = [
    DatasetInfo {
        name: "email-eu-core",
        file_name: "email-Eu-core.txt",
        url: "https://snap.stanford.edu/data/email-Eu-core.txt.gz",
        cleanup: Cleanup::DropIsolated,
        reference: ReferenceStats {
            n: 986,
            m: 16_064,
            avg_degree: 32.5842,
            avg_excess_degree: 73.6564,
            avg_clustering_coefficient: 0.4071,
            avg_path_length: 2.5843,
            diameter: 7,
            density: 3.3080e-2,
        },
        reference_prevalence: [0.0263, 0.0515, 0.0742, 0.0962, 0.1168],
        note: "gunzip into the data directory",
    },
    DatasetInfo {
        name: "polblogs",
        file_name: "polblogs.txt",
        url: "http://www-personal.umich.edu/~mejn/netdata/polblogs.zip",
        cleanup: Cleanup::DropIsolated,
        reference: ReferenceStats {
            n: 1224,
            m: 16_715,
            avg_degree: 27.3121,
            avg_excess_degree: 80.2587,
            avg_clustering_coefficient: 0.3197,
            avg_path_length: 2.7467,
            diameter: 8,
            density: 2.2332e-2,
        },
        reference_prevalence: [0.0191, 0.0377, 0.0556, 0.0721, 0.0878],
        note: "distributed as GML; convert the edges to a `u w` edge list first",
    },
    DatasetInfo {
        name: "ego-facebook",
        file_name: "ego-facebook.txt",
        url: "https://snap.stanford.edu/data/ego-Facebook.html",
        cleanup: Cleanup::LargestComponent,
        reference: ReferenceStats {
            n: 2851,
            m: 62_318,
            avg_degree: 43.7166,
            avg_excess_degree: 98.0664,
            avg_clustering_coefficient: 0.5914,
            avg_path_length: 4.1353,
            diameter: 14,
            density: 1.5339e-2,
        },
        reference_prevalence: [0.0126, 0.0244, 0.0359, 0.0472, 0.0579],
        note: "expects the circle-filtered 2851-node edge list, not facebook_combined.txt",
    },
];

pub fn manifest_entry(name: &str) -> Option<&'static DatasetInfo> {
    MANIFEST.iter().find(|d| d.name == name)
}

/// Where the data directory is: `$POOLTEST_DATA_DIR`, else `./data`.
pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Karate,
    SmallWorld,
    Named(&'static DatasetInfo),
    File(PathBuf),
}

impl Dataset {
    /// Known names first; anything else is treated as a file path.
    pub fn resolve(name: &str) -> Self {
        match name {
            "karate" => Dataset::Karate,
            "small-world" => Dataset::SmallWorld,
            other => manifest_entry(other)
                .map(Dataset::Named)
                .unwrap_or_else(|| Dataset::File(PathBuf::from(other))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Dataset::Karate => "karate".into(),
            Dataset::SmallWorld => "small-world".into(),
            Dataset::Named(info) => info.name.into(),
            Dataset::File(p) => p.display().to_string(),
        }
    }

    /// Loads the graph. `cleanup` overrides the dataset's default policy;
    /// `seed` only affects the synthetic graph.
    pub fn load(&self, cleanup: Option<Cleanup>, seed: u64) -> Result<Graph> {
        match self {
            Dataset::Karate => Ok(karate()),
            Dataset::SmallWorld => generate_small_world(&SmallWorldConfig::default(), seed),
            Dataset::Named(info) => {
                let path = data_dir().join(info.file_name);
                if !path.exists() {
                    return Err(Error::DataMissing {
                        name: info.name.into(),
                        path,
                        hint: format!(
                            "download from {} ({}) and set {DATA_DIR_ENV} to its directory",
                            info.url, info.note
                        ),
                    });
                }
                load_file(&path, cleanup.unwrap_or(info.cleanup))
            }
            Dataset::File(path) => {
                if !path.exists() {
                    return Err(Error::DataMissing {
                        name: path.display().to_string(),
                        path: path.clone(),
                        hint: "expected a whitespace-separated edge list".into(),
                    });
                }
                load_file(path, cleanup.unwrap_or_default())
            }
        }
    }
}

fn load_file(path: &Path, cleanup: Cleanup) -> Result<Graph> {
    load_edge_list(BufReader::new(File::open(path)?), cleanup)
}
