#include <modlog.h>
int main() { return 0; }
