#ifndef LOGCONC_IO_HPP
#define LOGCONC_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logconc/body.hpp"
#include "logconc/lowmstar.hpp"
#include "logconc/potential.hpp"

namespace logconc {

/// Malformed file content. what() reads "<source>:<line>: <message>".
class ParseError : public InputError {
public:
    ParseError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// `key = value` lines; '#' starts a comment; blank lines are skipped. Keys may
/// repeat (polytope vertices); `get` rejects repeats for scalar keys.
class KeyValueFile {
public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
        bool used = false;
    };

    static KeyValueFile parse(const std::string& text, std::string source);
    static KeyValueFile load(const std::filesystem::path& path);

    const std::string& source() const { return source_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }
    /// Directory that relative paths in the file resolve against.
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }
    bool has(const std::string& key) const;
    /// Value of a key that must appear at most once.
    std::optional<std::string> get(const std::string& key);
    std::string require(const std::string& key);
    std::vector<Entry*> all(const std::string& key);

    double get_double(const std::string& key, double fallback);
    double require_double(const std::string& key);
    long long get_int(const std::string& key, long long fallback);
    Vector get_vector(const std::string& key, int dim, const Vector& fallback);
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback);

    /// Throws naming the first key nobody asked for.
    void reject_unused() const;
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;
    int line_of(const std::string& key) const;

private:
    std::vector<Entry> entries_;
    std::string source_;
    std::filesystem::path base_dir_;
};

/// Number parsing that accepts "inf" and rejects trailing garbage.
double parse_number(const std::string& s);
std::vector<double> parse_list(const std::string& s);

/// lcgrid v1 text format.
GridPotential read_grid(std::istream& in, const std::string& source = "<grid>");
GridPotential load_grid(const std::filesystem::path& path);
void write_grid(std::ostream& out, const GridPotential& g);
void save_grid(const std::filesystem::path& path, const GridPotential& g);

/// Function spec: kind = gaussian | indicator_ball | indicator_box | norm_cone
/// | radial_piecewise | grid_file.
LogConcaveFn load_function(const std::filesystem::path& path);
LogConcaveFn function_from_text(const std::string& text, const std::string& source = "<spec>",
                                const std::filesystem::path& base_dir = ".");
LogConcaveFn function_from_keys(KeyValueFile& kv);

/// Body spec: body = ball | box | polytope | segment.
ConvexBody load_body(const std::filesystem::path& path);
ConvexBody body_from_text(const std::string& text, const std::string& source = "<body>");

struct ExperimentSpec {
    LowMstarConfig config;
    std::string mode = "finite_volume_ratio";  // or low_mstar
    std::string function = "counterexample";   // builtin name or spec path
    std::optional<LogConcaveFn> fn;
};

/// Experiment config: eps, M, lambda, n, trials, samples, seed, function,
/// mode, c_probe, threads.
ExperimentSpec load_experiment(const std::filesystem::path& path);
ExperimentSpec experiment_from_text(const std::string& text, const std::string& source = "<config>",
                                    const std::filesystem::path& base_dir = ".");

}  // namespace logconc

#endif
