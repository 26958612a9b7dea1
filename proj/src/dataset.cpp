#include "fmrbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "fmrbench/rng.hpp"
#include "fmrbench/util.hpp"

namespace fmrbench {

bool Dataset::has_missing() const {
    if (observed.empty()) return false;
    return std::any_of(observed.begin(), observed.end(), [](std::uint8_t o) { return o == 0; });
}

std::size_t Dataset::response_index(const std::string& name) const {
    for (std::size_t i = 0; i < response_names.size(); ++i)
        if (response_names[i] == name) return i;
    throw DataError("unknown response column: " + name);
}

GroupIndex build_group_index(const std::vector<std::string>& group_of) {
    GroupIndex gi;
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < group_of.size(); ++i) {
        auto it = pos.find(group_of[i]);
        if (it == pos.end()) {
            pos.emplace(group_of[i], gi.ids.size());
            gi.ids.push_back(group_of[i]);
            gi.rows.push_back({i});
        } else {
            gi.rows[it->second].push_back(i);
        }
    }
    return gi;
}

namespace {

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::string stripped = line;
    if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
    return split(stripped, ',');
}

}  // namespace

LoadedCsv load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV (no header): " + path);
    const std::vector<std::string> header = parse_csv_line(line);

    {
        std::set<std::string> seen;
        for (const auto& h : header)
            if (!seen.insert(h).second) throw DataError("duplicate header column: " + h);
    }

    auto col_of = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DataError("column not found: " + name);
        return static_cast<std::size_t>(it - header.begin());
    };

    if (schema.group_col.empty()) throw DataError("schema must name a group column");
    if (schema.response_cols.empty()) throw DataError("schema must name at least one response column");
    const std::size_t group_idx = col_of(schema.group_col);
    std::vector<std::size_t> response_idx;
    for (const auto& r : schema.response_cols) response_idx.push_back(col_of(r));

    std::vector<std::size_t> feature_idx;
    std::vector<std::string> feature_names;
    if (schema.feature_cols.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j == group_idx) continue;
            if (std::find(response_idx.begin(), response_idx.end(), j) != response_idx.end())
                continue;
            feature_idx.push_back(j);
            feature_names.push_back(header[j]);
        }
    } else {
        for (const auto& f : schema.feature_cols) {
            const std::size_t j = col_of(f);
            if (j == group_idx) throw DataError("column used as both group and feature: " + f);
            feature_idx.push_back(j);
            feature_names.push_back(f);
        }
    }
    if (feature_idx.empty()) throw DataError("schema yields zero feature columns");

    std::vector<std::vector<double>> xrows;
    std::vector<std::vector<std::uint8_t>> orows;
    std::vector<std::vector<double>> responses(response_idx.size());
    std::vector<std::string> group_of;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = parse_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));

        if (cells[group_idx].empty())
            throw DataError("row " + std::to_string(lineno) + ": empty group cell");
        group_of.push_back(cells[group_idx]);

        for (std::size_t r = 0; r < response_idx.size(); ++r) {
            const std::string& cell = cells[response_idx[r]];
            double v;
            if (cell.empty() || !parse_double(cell, v))
                throw DataError("row " + std::to_string(lineno) + ", column '" +
                                header[response_idx[r]] + "': non-numeric response value '" + cell +
                                "'");
            responses[r].push_back(v);
        }

        std::vector<double> xr(feature_idx.size(), 0.0);
        std::vector<std::uint8_t> obs(feature_idx.size(), 1);
        for (std::size_t f = 0; f < feature_idx.size(); ++f) {
            const std::string& cell = cells[feature_idx[f]];
            if (cell.empty()) {
                obs[f] = 0;
                xr[f] = 0.0;
                continue;
            }
            double v;
            if (!parse_double(cell, v))
                throw DataError("row " + std::to_string(lineno) + ", column '" +
                                header[feature_idx[f]] + "': non-numeric value '" + cell + "'");
            xr[f] = v;
        }
        xrows.push_back(std::move(xr));
        orows.push_back(std::move(obs));
    }
    if (xrows.empty()) throw DataError("CSV has zero data rows: " + path);

    LoadedCsv out;
    Dataset& ds = out.ds;
    const std::size_t n = xrows.size();
    const std::size_t p = feature_idx.size();
    ds.x = Matrix(n, p);
    bool any_missing = false;
    std::vector<std::uint8_t> observed(n * p, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            ds.x(i, j) = xrows[i][j];
            observed[i * p + j] = orows[i][j];
            if (!orows[i][j]) any_missing = true;
        }
    if (any_missing) ds.observed = std::move(observed);
    ds.responses = std::move(responses);
    ds.response_names = schema.response_cols;
    ds.feature_names = std::move(feature_names);
    ds.group_of = std::move(group_of);
    ds.group_col = schema.group_col;

    // Retained columns only, original relative order.
    for (std::size_t j = 0; j < header.size(); ++j) {
        const bool used = j == group_idx ||
                          std::find(response_idx.begin(), response_idx.end(), j) !=
                              response_idx.end() ||
                          std::find(feature_idx.begin(), feature_idx.end(), j) != feature_idx.end();
        if (used) ds.header.push_back(header[j]);
    }

    out.gi = build_group_index(ds.group_of);
    return out;
}

std::string dataset_to_csv(const Dataset& ds) {
    enum class Role { group, response, feature };
    struct Col {
        Role role;
        std::size_t idx;
    };
    std::vector<Col> cols;
    for (const auto& name : ds.header) {
        if (name == ds.group_col) {
            cols.push_back({Role::group, 0});
            continue;
        }
        const auto rit = std::find(ds.response_names.begin(), ds.response_names.end(), name);
        if (rit != ds.response_names.end()) {
            cols.push_back({Role::response,
                            static_cast<std::size_t>(rit - ds.response_names.begin())});
            continue;
        }
        const auto fit = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
        if (fit == ds.feature_names.end()) throw DataError("header column has no data: " + name);
        cols.push_back({Role::feature, static_cast<std::size_t>(fit - ds.feature_names.begin())});
    }

    std::string out;
    for (std::size_t c = 0; c < ds.header.size(); ++c) {
        if (c) out.push_back(',');
        out += ds.header[c];
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out.push_back(',');
            switch (cols[c].role) {
                case Role::group:
                    out += ds.group_of[i];
                    break;
                case Role::response:
                    out += format_double(ds.responses[cols[c].idx][i]);
                    break;
                case Role::feature:
                    // missing stays an empty cell
                    if (ds.is_observed(i, cols[c].idx)) out += format_double(ds.x(i, cols[c].idx));
                    break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

ColumnStats column_stats(const std::vector<double>& col, const std::string& name) {
    const std::size_t n = col.size();
    if (n < 2) throw DataError("column '" + name + "' has fewer than 2 rows; sd undefined");
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd <= 0.0) throw DataError("zero-variance column: " + name);
    return {mean, sd};
}

}  // namespace

Dataset standardize(const Dataset& ds) {
    if (ds.has_missing()) throw DataError("standardize requires a fully observed dataset");
    Dataset out = ds;
    Standardization rec;
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        const ColumnStats st = column_stats(ds.x.column(j), ds.feature_names[j]);
        rec.features.push_back(st);
        for (std::size_t i = 0; i < ds.n_rows(); ++i)
            out.x(i, j) = (ds.x(i, j) - st.mean) / st.sd;
    }
    for (std::size_t r = 0; r < ds.responses.size(); ++r) {
        const ColumnStats st = column_stats(ds.responses[r], ds.response_names[r]);
        rec.responses.push_back(st);
        for (double& v : out.responses[r]) v = (v - st.mean) / st.sd;
    }
    out.standardization = std::move(rec);
    return out;
}

std::vector<double> standardize_vector(const std::vector<double>& raw,
                                       const std::vector<ColumnStats>& stats) {
    if (raw.size() != stats.size())
        throw std::invalid_argument("standardize_vector: size mismatch");
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = (raw[j] - stats[j].mean) / stats[j].sd;
    return out;
}

std::vector<double> destandardize_vector(const std::vector<double>& standardized,
                                         const std::vector<ColumnStats>& stats) {
    if (standardized.size() != stats.size())
        throw std::invalid_argument("destandardize_vector: size mismatch");
    std::vector<double> out(standardized.size());
    for (std::size_t j = 0; j < standardized.size(); ++j)
        out[j] = stats[j].mean + stats[j].sd * standardized[j];
    return out;
}

HoldoutSplit grouped_holdout(const GroupIndex& gi, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw std::invalid_argument("holdout fraction must be in [0, 1)");
    HoldoutSplit split;
    split.holdout_fraction = fraction;
    split.train_rows.resize(gi.group_count());
    split.test_rows.resize(gi.group_count());

    auto rng = make_rng(seed);
    for (std::size_t g = 0; g < gi.group_count(); ++g) {
        std::vector<std::size_t> rows = gi.rows[g];
        const std::size_t k =
            static_cast<std::size_t>(std::floor(fraction * static_cast<double>(rows.size())));
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
            std::swap(rows[i], rows[pick(rng)]);
        }
        split.test_rows[g].assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
        split.train_rows[g].assign(rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end());
        std::sort(split.test_rows[g].begin(), split.test_rows[g].end());
        std::sort(split.train_rows[g].begin(), split.train_rows[g].end());
    }
    return split;
}

const std::vector<std::size_t>& eval_rows(const GroupIndex& gi, const HoldoutSplit& split,
                                          std::size_t g) {
    if (!split.test_rows[g].empty()) return split.test_rows[g];
    return gi.rows[g];
}

std::string standardization_to_json(const Dataset& ds) {
    if (!ds.standardization) throw std::invalid_argument("dataset has no standardization record");
    nlohmann::json j = nlohmann::json::object();
    const auto& rec = *ds.standardization;
    for (std::size_t i = 0; i < ds.feature_names.size(); ++i)
        j[ds.feature_names[i]] = {{"mean", rec.features[i].mean}, {"sd", rec.features[i].sd}};
    for (std::size_t i = 0; i < ds.response_names.size(); ++i)
        j[ds.response_names[i]] = {{"mean", rec.responses[i].mean}, {"sd", rec.responses[i].sd}};
    return j.dump(2) + "\n";
}

Standardization standardization_from_json(const std::string& text,
                                          const std::vector<std::string>& feature_names,
                                          const std::vector<std::string>& response_names) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Standardization rec;
    auto read = [&](const std::string& name) -> ColumnStats {
        if (!j.contains(name)) throw DataError("standardization record missing column: " + name);
        return {j.at(name).at("mean").get<double>(), j.at(name).at("sd").get<double>()};
    };
    for (const auto& f : feature_names) rec.features.push_back(read(f));
    for (const auto& r : response_names) rec.responses.push_back(read(r));
    return rec;
}

}  // namespace fmrbench
