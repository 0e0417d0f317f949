#if defined(CONFIG_A)
int a;
#elif defined(CONFIG_B)
int b;
#endif
