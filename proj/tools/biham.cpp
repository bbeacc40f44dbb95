#include <CLI11.hpp>

#include <iostream>

#include "biham/pipeline.hpp"

namespace {

struct GlobalOptions {
    std::string format = "text";
    long precision = 0;  // 0 = leave definition/default value
    int samples = 0;
    std::string seed_hex;
};

void apply_overrides(biham::SystemDefinition& def, const GlobalOptions& opt) {
    if (opt.precision > 0) def.zerotest.precision = opt.precision;
    if (opt.samples > 0) def.zerotest.samples = opt.samples;
    if (!opt.seed_hex.empty()) def.zerotest.seed = std::stoull(opt.seed_hex, nullptr, 16);
    def.zerotest.validate();
}

int emit(const biham::PipelineResult& r, const GlobalOptions& opt) {
    if (opt.format == "json") {
        std::cout << r.report.render_json(r.cfg.seed, r.cfg.precision);
    } else {
        if (!r.rendered.empty()) std::cout << r.rendered;
        std::cout << r.report.render_text();
    }
    return r.report.overall() == biham::CheckStatus::Pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic verifier for bihamiltonian systems of hydrodynamic type\n"
                 "under linear reciprocal transformations"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOptions opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--precision", opt.precision, "zero-test precision in bits (>= 64)");
    app.add_option("--samples", opt.samples, "zero-test sample count (>= 4)");
    app.add_option("--seed", opt.seed_hex, "zero-test sample seed (hex)");

    std::string check_file, transform_file, example_name;
    int m = 1, k = 1;

    CLI::App* check = app.add_subcommand("check", "run structural checks on a definition file");
    check->add_option("file", check_file, "system definition file")->required();

    CLI::App* transform =
        app.add_subcommand("transform", "apply the reciprocal transformation and verify");
    transform->add_option("file", transform_file, "system definition file")->required();

    CLI::App* example = app.add_subcommand("example", "run a built-in worked example");
    example->add_option("name", example_name, "kdv or toda")
        ->required()
        ->check(CLI::IsMember({"kdv", "toda"}));
    example->add_option("--m", m, "kdv parameter m (>= 1)");
    example->add_option("--k", k, "kdv parameter k (>= 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        biham::PipelineResult result;
        if (check->parsed()) {
            biham::SystemDefinition def = biham::parse_definition_file(check_file);
            apply_overrides(def, opt);
            result = biham::run_check(def);
        } else if (transform->parsed()) {
            biham::SystemDefinition def = biham::parse_definition_file(transform_file);
            apply_overrides(def, opt);
            result = biham::run_transform(def);
        } else {
            biham::SystemDefinition def = example_name == "kdv" ? biham::kdv_definition(m, k)
                                                                : biham::toda_definition();
            apply_overrides(def, opt);
            result = biham::run_example_definition(def, example_name, m, k);
        }
        return emit(result, opt);
    } catch (const biham::DefinitionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const biham::ParseError& e) {
        std::cerr << "error: " << e.what() << " at byte " << e.offset << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
