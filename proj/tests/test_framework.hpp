#pragma once

// Minimal always-on test support: REQUIRE prints [FAIL] file:line and exits 1.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <string>

#define REQUIRE(cond)                                                             \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << "  " #cond   \
                      << "\n";                                                    \
            std::exit(1);                                                         \
        }                                                                         \
    } while (0)

#define REQUIRE_MSG(cond, msg)                                                    \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << "  " << msg  \
                      << "\n";                                                    \
            std::exit(1);                                                         \
        }                                                                         \
    } while (0)

#define REQUIRE_THROWS_AS(stmt, ExType)                                           \
    do {                                                                          \
        bool caught_ = false;                                                     \
        try {                                                                     \
            stmt;                                                                 \
        } catch (const ExType&) {                                                 \
            caught_ = true;                                                       \
        } catch (const std::exception& e_) {                                      \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__                 \
                      << "  wrong exception type: " << e_.what() << "\n";         \
            std::exit(1);                                                         \
        }                                                                         \
        if (!caught_) {                                                           \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__                 \
                      << "  expected " #ExType " from: " #stmt "\n";              \
            std::exit(1);                                                         \
        }                                                                         \
    } while (0)

inline void requireClose(double got, double want, double tol, const char* file, int line,
                         const char* what) {
    const double scale = std::max(1.0, std::abs(want));
    if (!(std::abs(got - want) <= tol * scale)) {
        std::cerr.precision(17);
        std::cerr << "[FAIL] " << file << ":" << line << "  " << what << "  got=" << got
                  << " want=" << want << " tol=" << tol << "\n";
        std::exit(1);
    }
}

inline void requireCloseAbs(double got, double want, double tol, const char* file, int line,
                            const char* what) {
    if (!(std::abs(got - want) <= tol)) {
        std::cerr.precision(17);
        std::cerr << "[FAIL] " << file << ":" << line << "  " << what << "  got=" << got
                  << " want=" << want << " atol=" << tol << "\n";
        std::exit(1);
    }
}

inline void requireCloseC(std::complex<double> got, std::complex<double> want, double tol,
                          const char* file, int line, const char* what) {
    const double scale = std::max(1.0, std::abs(want));
    if (!(std::abs(got - want) <= tol * scale)) {
        std::cerr.precision(17);
        std::cerr << "[FAIL] " << file << ":" << line << "  " << what << "  got=(" << got.real()
                  << "," << got.imag() << ") want=(" << want.real() << "," << want.imag()
                  << ") tol=" << tol << "\n";
        std::exit(1);
    }
}

#define CLOSE(got, want, tol) requireClose((got), (want), (tol), __FILE__, __LINE__, #got)
#define CLOSE_ABS(got, want, tol) requireCloseAbs((got), (want), (tol), __FILE__, __LINE__, #got)
#define CLOSE_C(got, want, tol) requireCloseC((got), (want), (tol), __FILE__, __LINE__, #got)

inline int test_done(const char* name) {
    std::cout << "[OK] " << name << "\n";
    return 0;
}
