// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ldplab/cli/config.hpp"

namespace ldplab::cli {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

CsvWriter::CsvWriter(CsvHeader const& header, std::vector<std::string> const& columns)
    : ncols_(columns.size())
{
    text_ += fmt::format("# tool: {}\n# version: {}\n# config_digest: {}\n", kToolName,
                         kToolVersion, header.config_digest);
    for (auto const& [k, v] : header.extra)
        text_ += fmt::format("# {}: {}\n", k, v);
    row(columns);
}

void CsvWriter::row(std::vector<std::string> const& cells)
{
    if (cells.size() != ncols_)
        throw std::logic_error("CSV row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i > 0)
            text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

std::string CsvTable::comment(std::string const& key) const
{
    for (auto const& [k, v] : comments)
        if (k == key)
            return v;
    return {};
}

std::size_t CsvTable::column(std::string const& name) const
{
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::invalid_argument(fmt::format("CSV has no column '{}'", name));
    return static_cast<std::size_t>(it - columns.begin());
}

namespace {

std::vector<std::string> split(std::string const& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line)
    {
        if (c == sep)
        {
            out.push_back(cur);
            cur.clear();
        }
        else
        {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

CsvTable parse_csv(std::string const& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            auto body = line.substr(1);
            auto const colon = body.find(':');
            auto trim = [](std::string s) {
                auto const b = s.find_first_not_of(' ');
                auto const e = s.find_last_not_of(' ');
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            if (colon != std::string::npos)
                t.comments.emplace_back(trim(body.substr(0, colon)), trim(body.substr(colon + 1)));
            continue;
        }
        auto cells = split(line, ',');
        if (!have_header)
        {
            t.columns = std::move(cells);
            have_header = true;
        }
        else
        {
            if (cells.size() != t.columns.size())
                throw std::invalid_argument("CSV row width does not match the header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header)
        throw std::invalid_argument("CSV has no header row");
    return t;
}

std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(std::filesystem::path const& path, std::string const& content)
{
    std::error_code ec;
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError(fmt::format("cannot create '{}': {}", path.parent_path().string(),
                                      ec.message()));
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        if (!out)
            throw IoError(fmt::format("short write to '{}'", tmp.string()));
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError(fmt::format("cannot move '{}' into place: {}", path.string(), ec.message()));
}

//---------------------------------------------------------------------------//

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label, bool log_y)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)), log_y_(log_y)
{
}

namespace {

std::string escape(std::string const& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string coord(double v)
{
    return fmt::format("{:.2f}", v);
}

}  // namespace

std::string SvgChart::render() const
{
    constexpr double W = 720, H = 480, left = 80, right = 180, top = 60, bottom = 60;
    double const pw = W - left - right, ph = H - top - bottom;

    auto ty = [&](double y) { return log_y_ ? std::log10(y) : y; };
    auto usable = [&](double y) { return std::isfinite(y) && (!log_y_ || y > 0.0); };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto grow = [&](double x, double y) {
        if (!std::isfinite(x) || !usable(y))
            return;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, ty(y));
        ymax = std::max(ymax, ty(y));
    };
    for (auto const& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            grow(s.x[i], s.y[i]);
    for (auto const& b : bands_)
        for (std::size_t i = 0; i < b.x.size(); ++i)
        {
            grow(b.x[i], b.low[i]);
            grow(b.x[i], b.high[i]);
        }
    if (!std::isfinite(xmin))
    {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin)
        xmax = xmin + 1;
    if (log_y_)
    {
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
    }
    if (ymax == ymin)
        ymax = ymin + 1;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

    std::string s;
    s += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        W, H, W, H);
    s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
    s += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\">{}</text>\n", left, escape(title_));
    for (std::size_t i = 0; i < notes_.size(); ++i)
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#555\">{}</text>\n", left,
                         38 + 12 * i, escape(notes_[i]));

    // axes and ticks
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
                     left, top, pw, ph);
    for (int k = 0; k <= 5; ++k)
    {
        double const xv = xmin + (xmax - xmin) * k / 5.0;
        double const x = px(xv);
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#333\"/>\n", coord(x),
                         coord(top + ph), coord(top + ph + 5));
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", coord(x),
                         coord(top + ph + 18), fmt::format("{:.4g}", xv));
    }
    if (log_y_)
    {
        for (double e = ymin; e <= ymax + 1e-9; e += 1.0)
        {
            double const y = top + (1.0 - (e - ymin) / (ymax - ymin)) * ph;
            s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>\n",
                             coord(left), coord(y), coord(left + pw));
            s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{}</text>\n",
                             coord(left - 6), coord(y + 4), static_cast<int>(e));
        }
    }
    else
    {
        for (int k = 0; k <= 5; ++k)
        {
            double const yv = ymin + (ymax - ymin) * k / 5.0;
            double const y = py(yv);
            s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>\n",
                             coord(left), coord(y), coord(left + pw));
            s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", coord(left - 6),
                             coord(y + 4), fmt::format("{:.4g}", yv));
        }
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", coord(left + pw / 2),
                     coord(H - 15), escape(x_label_));
    s += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                     coord(top + ph / 2), escape(y_label_));

    for (auto const& b : bands_)
    {
        std::string pts;
        for (std::size_t i = 0; i < b.x.size(); ++i)
            if (usable(b.high[i]))
                pts += fmt::format("{},{} ", coord(px(b.x[i])), coord(py(b.high[i])));
        for (std::size_t i = b.x.size(); i-- > 0;)
        {
            double const lo = usable(b.low[i]) ? b.low[i] : (log_y_ ? std::pow(10.0, ymin) : ymin);
            if (usable(b.high[i]))
                pts += fmt::format("{},{} ", coord(px(b.x[i])), coord(py(lo)));
        }
        if (!pts.empty())
        {
            pts.pop_back();
            s += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n",
                             pts, b.color);
        }
    }
    for (std::size_t k = 0; k < series_.size(); ++k)
    {
        auto const& sr = series_[k];
        std::string pts;
        for (std::size_t i = 0; i < sr.x.size(); ++i)
            if (usable(sr.y[i]))
                pts += fmt::format("{},{} ", coord(px(sr.x[i])), coord(py(sr.y[i])));
        if (!pts.empty())
        {
            pts.pop_back();
            s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                             pts, sr.color, sr.dashed ? " stroke-dasharray=\"5,3\"" : "");
        }
        double const ly = top + 14 + 16 * static_cast<double>(k);
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"{4}/>\n",
                         coord(left + pw + 10), coord(ly), coord(left + pw + 30), sr.color,
                         sr.dashed ? " stroke-dasharray=\"5,3\"" : "");
        s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", coord(left + pw + 35), coord(ly + 4),
                         escape(sr.label));
    }
    s += "</svg>\n";
    return s;
}

}  // namespace ldplab::cli
