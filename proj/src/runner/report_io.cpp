#include "bpc/runner/report_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bpc::runner {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 13> bound_columns = {
    "nc1",    "nc2", "nc3", "nc4",      "nc5_stirling", "nc5_combinatorial", "nc6",
    "nn1",    "nn4", "bh_lower", "bh_upper", "thm1_large",   "thm1_small"};

// Gathers every bound of a report into column order.
std::vector<const BoundValue*> collect_bounds(const BoundReport& r) {
    std::vector<const BoundValue*> all;
    for (const auto& b : r.uppers) all.push_back(&b);
    for (const auto& b : r.lowers) all.push_back(&b);
    all.push_back(&r.bh_lower);
    all.push_back(&r.bh_upper);
    if (r.thm1) {
        all.push_back(&r.thm1->large_np);
        all.push_back(&r.thm1->small_np);
    }
    return all;
}

const BoundValue* find_bound(const std::vector<const BoundValue*>& all,
                             const std::string& name) {
    for (const auto* b : all) {
        if (b->name == name) return b;
    }
    return nullptr;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "instance_id,n,sum_p,sum_p2,z";
    for (const char* name : bound_columns) {
        out << ',' << name << "_value," << name << "_applicable";
    }
    out << ",exact_low,exact_high,q_tail,mc_point,mc_ci_low,mc_ci_high,"
           "sandwich_ok,agreement\n";

    for (const auto& row : rows) {
        out << row.instance_id << ',' << row.n << ',' << format_double(row.sum_p)
            << ',' << format_double(row.sum_p2) << ',' << row.z;
        std::vector<const BoundValue*> all;
        if (row.bounds) all = collect_bounds(*row.bounds);
        for (const char* name : bound_columns) {
            const BoundValue* b = row.bounds ? find_bound(all, name) : nullptr;
            if (b) {
                out << ',' << format_double(b->value) << ','
                    << (b->applicable ? "true" : "false");
            } else {
                out << ",,";
            }
        }
        const ExceedanceResult* exact =
            row.bounds ? &row.bounds->exact : (row.exact ? &*row.exact : nullptr);
        out << ',' << (exact ? format_double(exact->prob_low) : "");
        out << ',' << (exact ? format_double(exact->prob_high) : "");
        out << ',' << (row.bounds ? format_double(row.bounds->q_above_z.value) : "");
        out << ',' << (row.mc ? format_double(row.mc->point) : "");
        out << ',' << (row.mc ? format_double(row.mc->ci_low) : "");
        out << ',' << (row.mc ? format_double(row.mc->ci_high) : "");
        out << ',' << (row.bounds ? (row.bounds->sandwich_ok ? "true" : "false") : "");
        out << ',' << (row.agreement ? (*row.agreement ? "true" : "false") : "");
        out << '\n';
    }
    return out.str();
}

std::string rows_to_json(const std::vector<ReportRow>& rows,
                         const std::string& command, std::uint64_t seed) {
    json doc;
    doc["schema"] = "bpc-report-v1";
    doc["command"] = command;
    doc["seed"] = seed;
    json jrows = json::array();
    long long sandwich_failures = 0;
    long long agreement_failures = 0;
    for (const auto& row : rows) {
        json r;
        r["instance_id"] = row.instance_id;
        r["n"] = row.n;
        r["sum_p"] = row.sum_p;
        r["sum_p2"] = row.sum_p2;
        r["z"] = row.z;
        if (row.bounds) {
            json bounds;
            for (const auto* b : collect_bounds(*row.bounds)) {
                bounds[b->name] = {{"value", b->value},
                                   {"applicable", b->applicable},
                                   {"condition", b->condition}};
            }
            r["bounds"] = bounds;
            r["q_tail"] = {{"value", row.bounds->q_above_z.value},
                           {"radius", row.bounds->q_above_z.radius}};
            r["sandwich_ok"] = row.bounds->sandwich_ok;
            r["nc4_exact_union"] = row.bounds->nc4_exact_union;
            r["nc6_proof_product"] = row.bounds->nc6_proof_product;
            if (!row.bounds->sandwich_ok) ++sandwich_failures;
        } else {
            r["bounds"] = nullptr;
            r["q_tail"] = nullptr;
            r["sandwich_ok"] = nullptr;
        }
        const ExceedanceResult* exact =
            row.bounds ? &row.bounds->exact : (row.exact ? &*row.exact : nullptr);
        if (exact) {
            r["exact"] = {{"low", exact->prob_low},
                          {"high", exact->prob_high},
                          {"truncation_tail", exact->truncation_tail}};
        } else {
            r["exact"] = nullptr;
        }
        if (row.mc) {
            r["mc"] = {{"point", row.mc->point},
                       {"ci_low", row.mc->ci_low},
                       {"ci_high", row.mc->ci_high},
                       {"n_samples", row.mc->n_samples},
                       {"seed", row.mc->seed}};
        } else {
            r["mc"] = nullptr;
        }
        if (row.agreement) {
            r["agreement"] = *row.agreement;
            if (!*row.agreement) ++agreement_failures;
        } else {
            r["agreement"] = nullptr;
        }
        jrows.push_back(std::move(r));
    }
    doc["rows"] = std::move(jrows);
    doc["summary"] = {{"rows", rows.size()},
                      {"sandwich_failures", sandwich_failures},
                      {"agreement_failures", agreement_failures}};
    return doc.dump(2) + "\n";
}

std::string verify_to_csv(const std::vector<InvariantStat>& stats) {
    std::ostringstream out;
    out << "invariant,instances,checks,violations,worst_margin\n";
    for (const auto& s : stats) {
        out << s.name << ',' << s.instances << ',' << s.checks << ',' << s.violations
            << ',' << format_double(s.worst_margin) << '\n';
    }
    return out.str();
}

std::string verify_to_json(const std::vector<InvariantStat>& stats,
                           const VerifySummary& summary, std::uint64_t seed) {
    json doc;
    doc["schema"] = "bpc-verify-v1";
    doc["command"] = "verify";
    doc["seed"] = seed;
    json arr = json::array();
    for (const auto& s : stats) {
        arr.push_back({{"name", s.name},
                       {"instances", s.instances},
                       {"checks", s.checks},
                       {"violations", s.violations},
                       {"worst_margin", s.worst_margin}});
    }
    doc["invariants"] = std::move(arr);
    doc["summary"] = {{"violations", summary.violations},
                      {"nn1_tighter_than_nc2", summary.nn1_tighter},
                      {"nc2_tighter_than_nn1", summary.nc2_tighter}};
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output path: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing output: " + path);
}

}  // namespace bpc::runner
