#pragma once

#include <map>
#include <string>
#include <vector>

#include "bianchi/bredon.hpp"
#include "bianchi/reference.hpp"
#include "bianchi/spectral.hpp"
#include "bianchi/torsion.hpp"

namespace bianchi {

/// Version tag mixed into cache file names; bump on any change to the orbit
/// complex construction so stale dumps are never reused.
extern const char* kCacheVersion;

struct RunOptions {
    std::vector<long> ells = {2, 3};
    long qmax = 10;
    bool k_homology = false;
    std::string cache_dir;  // pass through resolve_cache_dir first
    long norm_cap = 2000;   // hemisphere norm budget for the floor search
};

/// The --cache-dir flag wins over the BIANCHI_CACHE_DIR environment
/// variable; an empty result disables the disk cache.
std::string resolve_cache_dir(const std::string& flag_value);

/// Orbit complex for m, read from the disk cache when a valid entry exists,
/// computed and written back otherwise.
OrbitComplex cached_orbit_complex(long m, const RunOptions& opt);

/// Whether a cache entry for m exists under the options' cache directory.
bool cache_has(long m, const RunOptions& opt);

/// Everything one pipeline pass computes for a single m.  Group homology,
/// mod-ell dimensions and K-homology need the spine free of singular points
/// (class number one); torsion subcomplex types are computed for every m.
struct MRun {
    long m = 0;
    long qmax = 10;
    bool homology_supported = false;
    std::vector<long> ells;
    std::map<long, HomeoType> torsion_types;     // ell -> reduced type
    std::map<long, std::vector<long>> mod_dims;  // ell -> dim H_q(; F_ell), q = 0..qmax
    AbelianGroup h1, h2;
    bool h2_extension_flagged = false;
    bool k_requested = false;
    AbelianGroup k0, k1;
    std::vector<std::string> warnings;
};

MRun run_one(long m, const RunOptions& opt);

/// Deterministic serialisations of a run (byte-identical across repeats).
std::string run_json(const MRun& r);
std::string run_markdown(const MRun& r);

/// Cell-by-cell comparison against the embedded reference tables; only rows
/// covering the computed data are checked, and each line names its anchor.
struct CompareReport {
    bool ok = true;
    std::vector<std::string> lines;
};

CompareReport compare_with_reference(const MRun& r);

/// Deterministic JSON form of a torsion subgraph (dot lives in torsion.hpp).
std::string torsion_graph_json(const TorsionGraph& g);

}  // namespace bianchi
