#include "llgmid/config.hpp"
#include "llgmid/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace llgmid;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("config defaults") {
    const RunConfig cfg = parse_config("N = 8\nk = 0.001\nT = 0.01\n");
    CHECK(cfg.N == 8);
    CHECK(cfg.k == 0.001);
    CHECK(cfg.T == 0.01);
    CHECK(cfg.mode == "newton");
    CHECK(cfg.preset == "exchange");
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.lex == 1.0);
    CHECK(cfg.eps == 1e-8);
    CHECK(cfg.iteration_cap == 100);
    CHECK(cfg.linear_tol == 1e-14);
}

TEST_CASE("config mode and tolerance") {
    const RunConfig cfg = parse_config("mode = fixedpoint\neps = 1e-8\n");
    CHECK(cfg.mode == "fixedpoint");
    CHECK(cfg.eps == 1e-8);
    CHECK(scheme_mode(cfg).kind == SchemeMode::Kind::FixedPoint);
    CHECK(scheme_mode(cfg).eps == 1e-8);
}

TEST_CASE("config errors carry the line number and key") {
    try {
        parse_config("k = -1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 1") != std::string::npos);
        CHECK(msg.find("'k'") != std::string::npos);
        CHECK(msg.find("positive") != std::string::npos);
    }

    try {
        parse_config("# comment\nN = 4\nwhatever = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("whatever") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("N = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("N 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode = midpointish\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("A1 = 1 0 0 0 1 0 0 0 1\n"), ConfigError);  // needs A2, A3
}

TEST_CASE("config builds models") {
    const Mesh mesh = build_unit_cube_mesh(2);

    RunConfig dmi = parse_config("preset = exchange_dmi\nlex = 1\nldm = 0.5\n");
    const MaterialModel m1 = make_model(dmi, mesh);
    CHECK(m1.pi.kind == PiKind::Scaling);
    CHECK(m1.pi.scale == doctest::Approx(0.125).epsilon(1e-15));  // ldm^2/(2 lex^2)

    dmi.paper_literal_pi = true;
    const MaterialModel m2 = make_model(dmi, mesh);
    CHECK(m2.pi.scale == doctest::Approx(0.25).epsilon(1e-15));  // ldm/(2 lex^2)

    const RunConfig gen = parse_config(
        "preset = general\n"
        "A1 = 2 0 0 0 2 0 0 0 2\nA2 = 2 0 0 0 2 0 0 0 2\nA3 = 2 0 0 0 2 0 0 0 2\n"
        "pi = uniaxial\npi_scale = 0.3\npi_axis = 0 0 2\n"
        "f = constant 0.1 0 -0.2\nalpha = 0.5\n");
    const MaterialModel m3 = make_model(gen, mesh);
    CHECK(m3.A[0](0, 0) == 2.0);
    CHECK(m3.pi.kind == PiKind::UniaxialAnisotropy);
    CHECK((m3.pi.axis - Vec3(0, 0, 1)).norm() <= 1e-15);
    CHECK(m3.alpha == 0.5);
    REQUIRE(m3.has_f());
    CHECK((m3.f[0] - Vec3(0.1, 0, -0.2)).norm() == 0.0);
}

TEST_CASE("trajectory CSV: header, rows, exact round-trip") {
    const std::string path = temp_path("llgmid_traj_test.csv");

    Trajectory empty;
    write_trajectory_csv(empty, path);
    {
        const std::string text = read_file(path);
        CHECK(text ==
              "step,time,energy,dissipation_increment,identity_residual,iterations,max_dev,min_dev\n");
    }

    Trajectory one;
    StepRecord rec;
    rec.index = 0;
    rec.time = 0.0012345678901234567;
    rec.energy = -17.000000000000123;
    rec.dissipation_increment = 4.9406564584124654e-320;  // subnormal
    rec.identity_residual = -3.3333333333333331e-01;
    rec.correction_term = 0.0;
    rec.iterations = 7;
    rec.max_dev = 1e-300;
    rec.min_dev = -0.1;
    one.records.push_back(rec);
    write_trajectory_csv(one, path);

    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::string extra;
    CHECK(!std::getline(in, extra));

    // parse back and compare bit for bit
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream ss(row);
    int step, iterations;
    double time, energy, diss, resid, maxd, mind;
    ss >> step >> time >> energy >> diss >> resid >> iterations >> maxd >> mind;
    CHECK(step == 0);
    CHECK(time == rec.time);
    CHECK(energy == rec.energy);
    CHECK(diss == rec.dissipation_increment);
    CHECK(resid == rec.identity_residual);
    CHECK(iterations == 7);
    CHECK(maxd == rec.max_dev);
    CHECK(mind == rec.min_dev);

    std::filesystem::remove(path);
}

TEST_CASE("CSV output is deterministic") {
    const Mesh mesh = build_unit_cube_mesh(2);
    const MaterialModel model = exchange_only(1.0);
    const System sys = prepare_system(mesh, model);
    const NodalField m0 = hedgehog_initial(mesh);

    const std::string p1 = temp_path("llgmid_det1.csv");
    const std::string p2 = temp_path("llgmid_det2.csv");
    write_trajectory_csv(run(sys, m0, 1e-3, 5e-3, SchemeMode::newton(1e-8)), p1);
    write_trajectory_csv(run(sys, m0, 1e-3, 5e-3, SchemeMode::newton(1e-8)), p2);
    CHECK(read_file(p1) == read_file(p2));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("VTK snapshot structure") {
    const Mesh mesh = build_unit_cube_mesh(1);
    NodalField m(mesh);
    for (auto& v : m.values) v = Vec3(0, 0, 1);
    const std::string path = temp_path("llgmid_snapshot.vtk");
    write_vtk_snapshot(mesh, m, path);

    const std::string text = read_file(path);
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(text.find("ASCII\n") != std::string::npos);
    CHECK(text.find("DATASET UNSTRUCTURED_GRID\n") != std::string::npos);
    CHECK(text.find("POINTS 8 double\n") != std::string::npos);
    CHECK(text.find("CELLS 6 30\n") != std::string::npos);
    CHECK(text.find("CELL_TYPES 6\n") != std::string::npos);
    CHECK(text.find("POINT_DATA 8\n") != std::string::npos);
    CHECK(text.find("VECTORS m double\n") != std::string::npos);

    // one vector line per point
    const auto pos = text.find("VECTORS m double\n");
    int lines = 0;
    for (std::size_t i = text.find('\n', pos) + 1; i < text.size(); ++i)
        if (text[i] == '\n') ++lines;
    CHECK(lines == 8);

    CHECK_THROWS_AS(write_vtk_snapshot(mesh, m, "/nonexistent_dir_zzz/out.vtk"),
                    std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("format_g17 round-trips doubles") {
    for (double x : {1.0 / 3.0, 2.2250738585072014e-308, 1.7976931348623157e308, -0.0, 12.5}) {
        const std::string s = format_g17(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}
