#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "excursion/cli.hpp"

namespace excursion::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) line += ',';
    line += csv_field(header[i]);
  }
  write_line(line);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::write_line(const std::string& line) {
  impl_->out << line << "\r\n";
  impl_->out.flush();
  if (!impl_->out) throw std::runtime_error("CSV write failed");
}

void CsvWriter::Row::sep() {
  if (fields_++ > 0) line_ += ',';
}

CsvWriter::Row& CsvWriter::Row::operator<<(double v) {
  sep();
  line_ += format_double(v);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(long long v) {
  sep();
  line_ += std::to_string(v);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(std::size_t v) {
  sep();
  line_ += std::to_string(v);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(std::string_view s) {
  sep();
  line_ += csv_field(s);
  return *this;
}

CsvWriter::Row::~Row() noexcept(false) { w_.write_line(line_); }

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_sweep_svg(const SweepPlot& plot) {
  constexpr double W = 720, H = 420, L = 70, R = 30, Tp = 50, B = 60;
  const double pw = W - L - R, ph = H - Tp - B;
  double a_lo = plot.a0, a_hi = plot.beta_half, y_hi = 1.0;
  for (const auto& r : plot.rows) {
    a_lo = std::min(a_lo, r.a);
    a_hi = std::max(a_hi, r.a);
    y_hi = std::max(y_hi, r.u_power);
  }
  if (!(a_hi > a_lo)) a_hi = a_lo + 1.0;
  double y_lo = 0.0;
  for (const auto& r : plot.rows) y_lo = std::min(y_lo, std::floor(r.u_power));
  y_hi = std::ceil(y_hi * 1.1 + 1e-9);
  auto X = [&](double a) { return L + (a - a_lo) / (a_hi - a_lo) * pw; };
  auto Y = [&](double v) { return Tp + (y_hi - v) / (y_hi - y_lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(plot.title) << "</text>\n";
  os << "<path d=\"M" << fmt(L) << ' ' << fmt(Tp) << " V" << fmt(Tp + ph) << " H" << fmt(L + pw)
     << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = y_lo + (y_hi - y_lo) * k / 4.0;
    os << "<text x=\"" << fmt(L - 8) << "\" y=\"" << fmt(Y(v) + 4)
       << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    const double a = a_lo + (a_hi - a_lo) * k / 4.0;
    os << "<text x=\"" << fmt(X(a)) << "\" y=\"" << fmt(Tp + ph + 18)
       << "\" text-anchor=\"middle\">" << fmt(a) << "</text>\n";
  }
  os << "<text x=\"" << fmt(L + pw / 2) << "\" y=\"" << fmt(H - 14)
     << "\" text-anchor=\"middle\">a</text>\n";

  auto marker = [&](double a, const char* label) {
    os << "<path d=\"M" << fmt(X(a)) << ' ' << fmt(Tp) << " V" << fmt(Tp + ph)
       << "\" stroke=\"gray\" stroke-dasharray=\"5,4\" fill=\"none\"/>\n";
    os << "<text x=\"" << fmt(X(a) + 4) << "\" y=\"" << fmt(Tp + 14) << "\" fill=\"gray\">"
       << label << " = " << fmt(a) << "</text>\n";
  };
  marker(plot.a0, "a0");
  marker(plot.beta_half, "beta/2");

  auto series = [&](auto value, const char* color, const char* name, double legend_y) {
    os << "<path d=\"";
    for (std::size_t i = 0; i < plot.rows.size(); ++i) {
      os << (i ? " L" : "M") << fmt(X(plot.rows[i].a)) << ' ' << fmt(Y(value(plot.rows[i])));
    }
    os << "\" stroke=\"" << color << "\" stroke-width=\"2\" fill=\"none\"/>\n";
    os << "<path d=\"M" << fmt(L + pw - 150) << ' ' << fmt(legend_y) << " h24\" stroke=\""
       << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(L + pw - 120) << "\" y=\"" << fmt(legend_y + 4) << "\">" << name
       << "</text>\n";
  };
  series([](const auto& r) { return r.u_power; }, "#1f5fbf", "u power", Tp + ph - 40);
  series([](const auto& r) { return static_cast<double>(r.log_power); }, "#c0392b", "log flag",
         Tp + ph - 20);
  os << "</svg>\n";
  return os.str();
}

}  // namespace excursion::cli
