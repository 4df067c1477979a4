#pragma once

// Command bodies for the refless CLI; main() only parses flags and forwards here
// so that the tests can drive each command without spawning a process.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "refless/error.hpp"
#include "refless/herglotz.hpp"
#include "refless/kdv.hpp"
#include "refless/potential.hpp"
#include "refless/record_io.hpp"
#include "refless/spectral_data.hpp"
#include "refless/three_spectra.hpp"
#include "refless/verify.hpp"

namespace refless::cli {

enum Exit : int { Ok = 0, VerifyFailed = 1, Invalid = 2, Missing = 3, Parse = 4, Write = 5 };

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::FileNotFound: return Missing;
    case ErrorKind::ParseError: return Parse;
    case ErrorKind::WriteError: return Write;
    default: return Invalid;
  }
}

// Runs body, turning a library error into its exit code and a one-line diagnostic.
template <class F>
int run(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

// "-" means stdout
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  write_text_file(path, text);
}

inline std::vector<double> grid(double xmin, double xmax, std::size_t n) {
  if (n < 2 || !(xmin < xmax)) throw Error(ErrorKind::InvalidArgument, "need n >= 2 and xmin < xmax");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = i + 1 == n ? xmax : xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

inline SpectralData load_spectral(const std::string& path) {
  return validate(spectral_from_record(read_record_file(path)));
}

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  return run(err, [&] {
    const auto data = load_spectral(path);
    out << "ok: N=" << data.size() << '\n';
    return Ok;
  });
}

inline int cmd_potential(const std::string& path, double xmin, double xmax, std::size_t n, const std::string& out_path,
                         std::ostream& out, std::ostream& err) {
  return run(err, [&] {
    const auto data = load_spectral(path);
    std::ostringstream os;
    os << "x,Q,q\n";
    for (double x : grid(xmin, xmax, n)) {
      const auto ev = eval_q(data, x);
      os << format_double(x) << ',' << format_double(ev.Q) << ',' << format_double(ev.q) << '\n';
    }
    emit(out_path, os.str(), out);
    return Ok;
  });
}

inline int cmd_verify(const std::string& path, VerifyLevel level, const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  return run(err, [&] {
    const auto data = load_spectral(path);
    const auto rep = verify(data, level);
    emit(out_path, rep.render(), out);
    return rep.overall() ? Ok : VerifyFailed;
  });
}

inline std::string frame_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.csv", k);
  return buf;
}

inline int cmd_kdv(const std::string& path, double t0, double t1, std::size_t frames, double xmin, double xmax,
                   std::size_t n, const std::string& outdir, std::ostream& err) {
  return run(err, [&] {
    if (frames < 1 || !(t0 <= t1)) throw Error(ErrorKind::InvalidArgument, "need frames >= 1 and t0 <= t1");
    const auto data = load_spectral(path);
    const auto xs = grid(xmin, xmax, n);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw Error(ErrorKind::WriteError, "cannot create " + outdir);
    const double dt = (t1 - t0) / static_cast<double>(std::max<std::size_t>(frames - 1, 1));
    for (std::size_t k = 0; k < frames; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      std::ostringstream os;
      os << "x,u\n";
      for (double x : xs) os << format_double(x) << ',' << format_double(eval_u(data, x, t)) << '\n';
      write_text_file(std::filesystem::path(outdir) / frame_name(k), os.str());
    }
    return Ok;
  });
}

enum class SpectraMode { Forward, Invert };

inline int cmd_spectra(SpectraMode mode, const std::string& path, const std::string& out_path, std::ostream& out,
                       std::ostream& err) {
  return run(err, [&] {
    const auto rec = read_record_file(path);
    const std::vector<std::string> order{"kappa", "m", "mu"};
    if (mode == SpectraMode::Forward) {
      const auto data = norming_from_three_spectra(three_from_record(rec));
      emit(out_path, render_record(to_record(data), order), out);
    } else {
      const auto data = validate(spectral_from_record(rec));
      const ThreeSpectra three{data.kappa, mu_from_norming(data)};
      emit(out_path, render_record(to_record(three), order), out);
    }
    return Ok;
  });
}

enum class HerglotzMode { ToProduct, ToMeasure };

namespace detail {

inline std::vector<double> optional_field(const Record& rec, std::string_view name) {
  const auto it = rec.find(name);
  return it == rec.end() ? std::vector<double>{} : it->second;
}

}  // namespace detail

inline int cmd_herglotz(HerglotzMode mode, const std::string& path, const std::string& out_path, std::ostream& out,
                        std::ostream& err) {
  return run(err, [&] {
    const auto rec = read_record_file(path);
    if (mode == HerglotzMode::ToProduct) {
      HerglotzMeasure nu{detail::optional_field(rec, "xi"), detail::optional_field(rec, "d"), 0.0};
      if (const auto d0 = detail::optional_field(rec, "d0"); !d0.empty()) {
        if (d0.size() != 1) throw Error(ErrorKind::ParseError, "d0 must be a single number");
        nu.d0 = d0[0];
      }
      const auto seq = measure_to_product(nu);
      emit(out_path, render_record(Record{{"lambda", seq.lambda}}), out);
    } else {
      const auto nu = product_to_measure(ZeroPoleSequence{detail::optional_field(rec, "lambda")});
      const std::vector<std::string> order{"xi", "d", "d0"};
      emit(out_path, render_record(Record{{"xi", nu.xi}, {"d", nu.d}, {"d0", {nu.d0}}}, order), out);
    }
    return Ok;
  });
}

}  // namespace refless::cli
