#include <skewmatch/cli.hpp>

int main(int argc, char** argv) {
    return skewmatch::cli::run(argc, argv);
}
