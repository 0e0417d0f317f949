#ifndef CONFIG_A
int no_a;
#endif
