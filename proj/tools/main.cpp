#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "verbs.hpp"

using namespace stratk;

namespace {

void write(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(Error::Kind::usage, path, "cannot write file");
  f << text;
}

int finish(const std::string& verb, cli::Outcome out, const cli::Options& o) {
  io::Json report = io::header("report");
  report["verb"] = verb;
  report["ok"] = out.code == 0;
  report["exit_code"] = out.code;
  report.update(out.report);
  if (out.result) report["result"] = *out.result;
  if (out.result && !o.out_path.empty()) write(o.out_path, io::dump(*out.result));
  if (!o.json_path.empty()) write(o.json_path, io::dump(report));
  if (!o.quiet)
    for (const auto& l : out.lines) std::cout << l << "\n";
  return out.code;
}

int fail(const std::string& verb, const Error& e, const cli::Options& o) {
  const int code = e.kind() == Error::Kind::usage ? 2 : 1;
  io::Json report = io::header("report");
  report["verb"] = verb;
  report["ok"] = false;
  report["exit_code"] = code;
  report["error"] = {{"kind", to_string(e.kind())}, {"entity", e.entity()}, {"message", e.what()}};
  if (!o.json_path.empty()) {
    try {
      write(o.json_path, io::dump(report));
    } catch (const Error&) {
    }
  }
  std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratk: stratified bundles over cell complexes and their K_0"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  cli::Options o;
  app.add_option("--cap", o.cap, "largest fiber rank enumerated")->capture_default_str();
  app.add_option("--category", o.category, "builtin category name or category file")->capture_default_str();
  app.add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--json", o.json_path, "write the JSON report here (- for stdout)");
  app.add_option("-o,--out", o.out_path, "write the produced object here (- for stdout)");
  app.add_flag("--quiet", o.quiet, "no human-readable output");

  std::string file, file2, name, map_file;
  std::vector<std::string> files;
  std::optional<std::size_t> stratum;
  std::function<cli::Outcome()> run;

  auto* v = app.add_subcommand("validate", "validate a category, complex, space, bundle or polytope file");
  v->add_option("file", file)->required();
  v->callback([&] { run = [&] { return cli::validate(file, o); }; });

  auto* a = app.add_subcommand("assemble", "total complex of a space, with stratum tags");
  a->add_option("space", file)->required();
  a->callback([&] { run = [&] { return cli::assemble(file, o); }; });

  auto* c = app.add_subcommand("classify", "isomorphism classes over a complex or space");
  c->add_option("base", file)->required();
  c->callback([&] { run = [&] { return cli::classify(file, o); }; });

  for (const char* op : {"sum", "tensor"}) {
    auto* s = app.add_subcommand(op, std::string(op == std::string("sum") ? "direct sum" : "tensor product") +
                                         " of two bundles on one base");
    s->add_option("left", file)->required();
    s->add_option("right", file2)->required();
    const std::string bif = op == std::string("sum") ? "direct_sum" : "tensor";
    s->callback([&, bif] { run = [&, bif] { return cli::combine(bif, file, file2, o); }; });
  }

  auto* f = app.add_subcommand("apply-functor", "apply identity, dual, det, trivial or tensor(k) fiberwise");
  f->add_option("functor", name)->required();
  f->add_option("bundle", file)->required();
  f->callback([&] { run = [&] { return cli::apply_functor(name, file, o); }; });

  auto* p = app.add_subcommand("pullback", "pull a bundle back along a map file");
  p->add_option("map", map_file)->required();
  p->add_option("bundle", file)->required();
  p->callback([&] { run = [&] { return cli::pullback(map_file, file, o); }; });

  auto* fl = app.add_subcommand("flatten", "single flat cocycle on the total complex");
  fl->add_option("bundle", file)->required();
  fl->callback([&] { run = [&] { return cli::flatten(file, o); }; });

  auto* t = app.add_subcommand("tangent", "stratified tangent bundle of a polytope");
  t->add_option("polytope", file)->required();
  t->callback([&] { run = [&] { return cli::tangent(file, o); }; });

  auto* k = app.add_subcommand("k0", "Grothendieck group of the class monoid");
  k->add_option("space", file)->required();
  k->callback([&] { run = [&] { return cli::k0(file, o); }; });

  auto* kh = app.add_subcommand("k0-hom", "restriction or pullback homomorphism on K_0");
  kh->add_option("space", file)->required();
  kh->add_option("--stratum", stratum, "restrict to this stratum");
  kh->add_option("--map", map_file, "pull back along this map file");
  kh->callback([&] { run = [&] { return cli::k0_hom(file, stratum, map_file, o); }; });

  auto* ch = app.add_subcommand("check", "run the invariant suite on the given files");
  ch->add_option("files", files)->required();
  ch->callback([&] { run = [&] { return cli::check(files, o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return finish(verb, run(), o);
  } catch (const Error& e) {
    return fail(verb, e, o);
  } catch (const std::exception& e) {
    return fail(verb, Error(Error::Kind::parse, verb, e.what()), o);
  }
}
