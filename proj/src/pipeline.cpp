#include "bianchi/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bianchi {

const char* kCacheVersion = "v1";

std::string resolve_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("BIANCHI_CACHE_DIR");
    return env ? env : "";
}

namespace {

std::string cache_path(long m, const RunOptions& opt) {
    return opt.cache_dir + "/orbit-m" + std::to_string(m) + "-" + kCacheVersion + ".json";
}

}  // namespace

bool cache_has(long m, const RunOptions& opt) {
    return !opt.cache_dir.empty() && std::filesystem::exists(cache_path(m, opt));
}

OrbitComplex cached_orbit_complex(long m, const RunOptions& opt) {
    if (cache_has(m, opt)) {
        std::ifstream in(cache_path(m, opt));
        std::stringstream buf;
        buf << in.rdbuf();
        return orbit_complex_from_json(buf.str());
    }
    FundamentalPolyhedron P = floor_decomposition(make_ring(m), opt.norm_cap);
    face_pairings(P);
    OrbitComplex oc = build_orbit_complex(P);
    if (!opt.cache_dir.empty()) {
        std::filesystem::create_directories(opt.cache_dir);
        std::ofstream out(cache_path(m, opt));
        out << orbit_complex_json(oc);
    }
    return oc;
}

MRun run_one(long m, const RunOptions& opt) {
    MRun r;
    r.m = m;
    r.qmax = opt.qmax;
    r.ells = opt.ells;
    r.k_requested = opt.k_homology;
    OrbitComplex oc = cached_orbit_complex(m, opt);

    for (long ell : opt.ells)
        r.torsion_types[ell] = homeo_type(reduce_torsion_graph(torsion_subgraph(oc, ell)));

    r.homology_supported = true;
    for (int d = 0; d <= 2; ++d)
        for (long c : oc.by_dim[d])
            if (oc.cells[c].in_spine && oc.cells[c].on_cusp) r.homology_supported = false;
    if (!r.homology_supported) {
        r.warnings.push_back("m=" + std::to_string(m) +
                             ": class number exceeds one; only the torsion subcomplex "
                             "types are computed");
        return r;
    }

    IntegralPage ip = integral_page(oc, 2);
    LowDegreeHomology low = assemble_low_degree(ip);
    r.h1 = low.h1;
    r.h2_extension_flagged = low.h2_extension_ambiguous;

    // mod pages: the requested primes, plus 2 and 3 which the H_2 extension
    // resolution always needs
    std::set<long> primes(opt.ells.begin(), opt.ells.end());
    primes.insert(2);
    primes.insert(3);
    long page_qmax = std::max<long>(opt.qmax, 2);
    std::map<long, ModPage> pages;
    std::map<long, long> h2_dims;
    for (long ell : primes) {
        pages.emplace(ell, mod_page(oc, ell, page_qmax));
        h2_dims[ell] = mod_homology_dims(pages.at(ell)).dims[2];
    }
    try {
        r.h2 = resolve_h2(low, h2_dims);
    } catch (const AssemblyAmbiguous& e) {
        r.h2 = low.h2_direct_sum;
        r.warnings.push_back("m=" + std::to_string(m) + ": H_2 extension unresolved (" +
                             e.what() + "); reporting the direct sum of the graded pieces");
    }
    for (long ell : opt.ells) {
        std::vector<long> dims = mod_homology_dims(pages.at(ell)).dims;
        dims.resize(opt.qmax + 1);
        r.mod_dims[ell] = dims;
    }

    if (opt.k_homology) {
        KHomologyResult K = k_homology_assembly(build_bredon_complex(oc));
        r.k0 = K.k0;
        r.k1 = K.k1;
        r.warnings.insert(r.warnings.end(), K.warnings.begin(), K.warnings.end());
    }
    return r;
}

std::string run_json(const MRun& r) {
    nlohmann::ordered_json j;
    j["m"] = r.m;
    j["qmax"] = r.qmax;
    j["homology_supported"] = r.homology_supported;
    nlohmann::ordered_json tt;
    for (const auto& [ell, t] : r.torsion_types) tt[std::to_string(ell)] = t.str();
    j["torsion_types"] = tt;
    if (r.homology_supported) {
        nlohmann::ordered_json md;
        for (const auto& [ell, dims] : r.mod_dims) md[std::to_string(ell)] = dims;
        j["mod_dims"] = md;
        j["h1"] = r.h1.str();
        j["h2"] = r.h2.str();
        j["h2_extension_flagged"] = r.h2_extension_flagged;
        if (r.k_requested) {
            j["k0"] = r.k0.str();
            j["k1"] = r.k1.str();
        }
    }
    j["warnings"] = r.warnings;
    return j.dump(1);
}

std::string run_markdown(const MRun& r) {
    std::ostringstream out;
    out << "## m = " << r.m << "\n\n";
    for (const auto& [ell, t] : r.torsion_types)
        out << "- " << ell << "-torsion subcomplex: " << t.str() << "\n";
    if (r.homology_supported) {
        out << "- H_1 = " << r.h1.str() << "\n";
        out << "- H_2 = " << r.h2.str()
            << (r.h2_extension_flagged ? " (extension resolved via mod-ell dimensions)" : "")
            << "\n";
        for (const auto& [ell, dims] : r.mod_dims) {
            out << "- dim H_q(; F_" << ell << "), q = 0.." << r.qmax << ":";
            for (long d : dims) out << " " << d;
            out << "\n";
        }
        if (r.k_requested)
            out << "- K_0 = " << r.k0.str() << ", K_1 = " << r.k1.str() << "\n";
    }
    for (const std::string& w : r.warnings) out << "- warning: " << w << "\n";
    return out.str();
}

CompareReport compare_with_reference(const MRun& r) {
    CompareReport rep;
    auto line = [&](bool ok, const std::string& what, const char* anchor) {
        rep.ok = rep.ok && ok;
        rep.lines.push_back(std::string(ok ? "   ok  " : " DIFF  ") + what + "  [" + anchor +
                            "]");
    };
    auto series_check = [&](long ell, const std::pair<IPoly, IPoly>& series,
                            const char* anchor) {
        auto it = r.mod_dims.find(ell);
        if (it == r.mod_dims.end() || r.qmax < 3) return;
        std::vector<long> coeff = series_coefficients(series.first, series.second, r.qmax);
        bool ok = true;
        for (long q = 3; q <= r.qmax; ++q) ok = ok && it->second[q] == coeff[q];
        line(ok, "m=" + std::to_string(r.m) + " dim H_q(; F_" + std::to_string(ell) +
                 ") for q = 3.." + std::to_string(r.qmax),
             anchor);
    };

    bool in_homology_table = true;
    try {
        reference_betti1(r.m);
    } catch (const UnknownArtifact&) {
        in_homology_table = false;
    }
    if (in_homology_table && r.homology_supported) {
        line(r.h1 == reference_h1(r.m),
             "m=" + std::to_string(r.m) + " H_1 computed " + r.h1.str() + " expected " +
                 reference_h1(r.m).str(),
             anchor_homology());
        line(r.h2 == reference_h2(r.m),
             "m=" + std::to_string(r.m) + " H_2 computed " + r.h2.str() + " expected " +
                 reference_h2(r.m).str(),
             anchor_homology());
        series_check(2, reference_p2_series(), anchor_series());
        series_check(3, reference_p3_series(), anchor_series());
    }

    HomeoType ref3;
    if (reference_homeo3(r.m, ref3)) {
        auto it = r.torsion_types.find(3);
        if (it != r.torsion_types.end())
            line(it->second == ref3,
                 "m=" + std::to_string(r.m) + " 3-torsion type computed " +
                     it->second.str() + " expected " + ref3.str(),
                 anchor_figure());
        if (r.homology_supported && !in_homology_table)
            series_check(3, torsion_poincare_series(ref3), anchor_figure());
    }

    AbelianGroup k0, k1;
    if (r.k_requested && r.homology_supported && reference_k_homology(r.m, k0, k1)) {
        line(r.k0 == k0 && r.k1 == k1,
             "m=" + std::to_string(r.m) + " K-homology computed (" + r.k0.str() + ", " +
                 r.k1.str() + ") expected (" + k0.str() + ", " + k1.str() + ")",
             anchor_k_table());
    }

    if (rep.lines.empty())
        rep.lines.push_back("   --  m=" + std::to_string(r.m) +
                            ": no reference rows cover the requested data");
    return rep;
}

std::string torsion_graph_json(const TorsionGraph& g) {
    nlohmann::ordered_json j;
    j["ell"] = g.ell;
    nlohmann::ordered_json vs = nlohmann::ordered_json::array();
    for (const TorsionVertex& v : g.vertices)
        vs.push_back({{"cell", v.cell}, {"type", finite_group_name(v.type)}});
    j["vertices"] = vs;
    nlohmann::ordered_json es = nlohmann::ordered_json::array();
    for (const TorsionEdge& e : g.edges)
        es.push_back({{"cell", e.cell},
                      {"type", finite_group_name(e.type)},
                      {"v0", e.v0},
                      {"v1", e.v1}});
    j["edges"] = es;
    return j.dump(1);
}

}  // namespace bianchi
