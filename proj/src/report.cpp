#include "vortex/report.hpp"

#include <fstream>

#include "vortex/error.hpp"

namespace vortex {

namespace {

void join(std::string& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text, std::vector<std::filesystem::path>& log)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::invalid_argument, "write failed for " + path.string());
    log.push_back(path);
}

} // namespace

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
                   const std::string& spec_hash)
{
    std::string out = "# spec_hash=" + spec_hash + "\n";
    join(out, columns);
    for (const auto& r : rows) join(out, r);
    return out;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const ExperimentSpec& spec,
                                                 const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::invalid_argument, "cannot create output directory " + dir.string());

    std::vector<std::filesystem::path> written;
    if (!result.rows.empty()) {
        std::vector<std::vector<std::string>> cells;
        cells.reserve(result.rows.size());
        for (const auto& r : result.rows) cells.push_back(result_cells(r));
        write_file(dir / "results.csv", to_csv(result_columns(), cells, spec.hash), written);
    }
    for (const auto& t : result.tables) write_file(dir / t.file, to_csv(t.columns, t.rows, spec.hash), written);
    for (const auto& c : result.curves) {
        std::vector<std::vector<std::string>> cells;
        for (const auto& [x, y] : c.points) cells.push_back({format_number(x), format_number(y)});
        write_file(dir / c.file, to_csv({c.x_label, c.y_label}, cells, spec.hash), written);
    }
    for (const auto& [file, imi] : result.imi)
        write_file(dir / file, "# spec_hash=" + spec.hash + "\n" + to_csv(imi), written);

    nlohmann::json summary = result.summary;
    summary["experiment"] = std::string(to_string(result.kind));
    summary["spec_hash"] = spec.hash;
    summary["seed"] = spec.seed;
    summary["config"] = spec.effective;
    write_file(dir / "summary.json", summary.dump(2) + "\n", written);
    return written;
}

} // namespace vortex
